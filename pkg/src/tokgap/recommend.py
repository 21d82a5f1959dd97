"""Noise level recommendation.

Evaluates a grid of noise levels against a fixed target corpus: for each
level and seed, the source corpus is noised, both corpora are profiled
under the same vocabulary, and the split word ratio difference is
recorded. The recommended level is the one with the lowest seed-mean
difference. This is a cheap proxy grounded in how strongly that
difference tracks transfer quality; it is not a guarantee of picking the
level a full hyperparameter search would find.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .conllu import Corpus, GraphemeInventory, extract_inventory
from .errors import DataError
from .measures import split_word_ratio_difference
from .noise import NoiseConfig, inject
from .subword import SubwordVocab, TokenizationProfile, profile

DEFAULT_GRID = (0.0, 0.15, 0.35, 0.55, 0.75, 0.95)
DEFAULT_SEEDS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class LevelOutcome:
    level: float
    mean_difference: float
    per_seed: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class RecommendationResult:
    grid: tuple[float, ...]
    seeds: tuple[int, ...]
    outcomes: tuple[LevelOutcome, ...]
    chosen_level: float

    def to_json(self) -> str:
        payload = {
            "grid": list(self.grid),
            "seeds": list(self.seeds),
            "levels": [
                {
                    "level": outcome.level,
                    "mean_difference": outcome.mean_difference,
                    "per_seed": [
                        {"seed": seed, "difference": difference}
                        for seed, difference in outcome.per_seed
                    ],
                }
                for outcome in self.outcomes
            ],
            "chosen_level": self.chosen_level,
        }
        return json.dumps(payload, indent=2) + "\n"


def _evaluate_cell(source: Corpus, inventory: GraphemeInventory,
                   vocab: SubwordVocab, target_profile: TokenizationProfile,
                   level: float, seed: int) -> float:
    noised, _ = inject(source, inventory, NoiseConfig(level=level, seed=seed))
    return split_word_ratio_difference(profile(noised, vocab), target_profile)


def recommend(source: Corpus, target: Corpus, vocab: SubwordVocab,
              grid: tuple[float, ...] = DEFAULT_GRID,
              seeds: tuple[int, ...] = DEFAULT_SEEDS,
              jobs: int = 1) -> RecommendationResult:
    """Pick the noise level whose split word ratio difference is smallest.

    Differences are averaged over the seeds before taking the minimum;
    ties go to the smaller level, which corrupts the source the least.
    """
    if not source.sentences or not target.sentences:
        raise DataError("recommendation requires non-empty source and target corpora")
    if not grid:
        raise DataError("noise level grid must be non-empty")
    if not seeds:
        raise DataError("at least one seed is required")
    if len(set(grid)) != len(grid):
        raise DataError("noise level grid contains duplicates")
    inventory = extract_inventory(source)
    target_profile = profile(target, vocab)
    cells = [(level, seed) for level in grid for seed in seeds]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = {
                (level, seed): executor.submit(
                    _evaluate_cell, source, inventory, vocab, target_profile,
                    level, seed,
                )
                for level, seed in cells
            }
            differences = {key: future.result() for key, future in futures.items()}
    else:
        differences = {
            (level, seed): _evaluate_cell(source, inventory, vocab,
                                          target_profile, level, seed)
            for level, seed in cells
        }
    outcomes = []
    for level in grid:
        per_seed = tuple((seed, differences[(level, seed)]) for seed in seeds)
        mean = sum(difference for _, difference in per_seed) / len(seeds)
        outcomes.append(LevelOutcome(level=level, mean_difference=mean,
                                     per_seed=per_seed))
    chosen = min(outcomes, key=lambda outcome: (outcome.mean_difference,
                                                outcome.level))
    return RecommendationResult(grid=tuple(grid), seeds=tuple(seeds),
                                outcomes=tuple(outcomes),
                                chosen_level=chosen.level)

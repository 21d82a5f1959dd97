"""Tie-corrected Spearman rank correlation with p-values.

Ranks use mid-rank tie handling; the coefficient is the Pearson
correlation of the two rank vectors. Two-sided p-values come from the
Student t approximation, evaluated through the regularized incomplete
beta function, with an optional exact permutation mode for very small
samples. Accuracies and measure values arrive as external observations;
nothing here trains or evaluates models.
"""

import csv
import io
import math
from dataclasses import dataclass
from itertools import permutations

from .errors import (
    ConstantInputError,
    DataError,
    LengthMismatchError,
    TooFewSamplesError,
)

T_APPROXIMATION = "t"
EXACT_PERMUTATION = "exact"
EXACT_PERMUTATION_MAX_N = 10

_RESERVED_COLUMNS = ("group", "noise_level", "seed", "accuracy")


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p_value: float
    sample_size: int


def midranks(values: list[float]) -> list[float]:
    """Ranks starting at 1, ties sharing the mean of their rank range."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        end = start
        while end + 1 < len(order) and values[order[end + 1]] == values[order[start]]:
            end += 1
        mean_rank = (start + end) / 2 + 1
        for position in range(start, end + 1):
            ranks[order[position]] = mean_rank
        start = end + 1
    return ranks


def _pearson(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    return cov / math.sqrt(var_x * var_y)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Lentz's algorithm for the incomplete beta continued fraction.
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    result = d
    for m in range(1, 400):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        result *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        result *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return result


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= t) for a Student t variable with ``df`` degrees of freedom."""
    if df <= 0:
        raise DataError("degrees of freedom must be positive")
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def _validate_inputs(xs, ys) -> int:
    if len(xs) != len(ys):
        raise LengthMismatchError(
            f"input lengths differ: {len(xs)} versus {len(ys)}"
        )
    n = len(xs)
    if n < 3:
        raise TooFewSamplesError(f"need at least 3 observations, got {n}")
    if all(x == xs[0] for x in xs):
        raise ConstantInputError("all x values are identical")
    if all(y == ys[0] for y in ys):
        raise ConstantInputError("all y values are identical")
    return n


def spearman(xs: list[float], ys: list[float],
             method: str = T_APPROXIMATION) -> CorrelationResult:
    """Spearman's rank correlation between two equally long value lists."""
    n = _validate_inputs(xs, ys)
    rho = _pearson(midranks(list(xs)), midranks(list(ys)))
    rho = max(-1.0, min(1.0, rho))
    if method == T_APPROXIMATION:
        if abs(rho) == 1.0:
            p = 0.0
        else:
            t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
            p = student_t_two_sided_p(abs(t), n - 2)
    elif method == EXACT_PERMUTATION:
        if n > EXACT_PERMUTATION_MAX_N:
            raise DataError(
                f"exact permutation p-values are limited to n <= "
                f"{EXACT_PERMUTATION_MAX_N}, got {n}"
            )
        p = _permutation_p(list(xs), list(ys), abs(rho))
    else:
        raise DataError(f"unknown p-value method {method!r}")
    return CorrelationResult(rho=rho, p_value=p, sample_size=n)


def _permutation_p(xs: list[float], ys: list[float], observed: float) -> float:
    x_ranks = midranks(xs)
    y_ranks = midranks(ys)
    at_least_as_extreme = 0
    total = 0
    for permuted in permutations(y_ranks):
        total += 1
        if abs(_pearson(x_ranks, list(permuted))) >= observed - 1e-12:
            at_least_as_extreme += 1
    return at_least_as_extreme / total


@dataclass(frozen=True)
class Observation:
    group: str
    noise_level: float
    seed: int
    accuracy: float
    measures: dict


@dataclass(frozen=True)
class ObservationSet:
    """External per-run records: measure values paired with accuracies."""

    records: tuple[Observation, ...]

    @property
    def measure_names(self) -> tuple[str, ...]:
        names: set[str] = set()
        for record in self.records:
            names.update(record.measures)
        return tuple(sorted(names))

    @property
    def groups(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for record in self.records:
            seen.setdefault(record.group, None)
        return tuple(seen)

    @classmethod
    def from_csv(cls, text: str) -> "ObservationSet":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None:
            raise DataError("observations CSV has no header row")
        missing = [c for c in _RESERVED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise DataError(f"observations CSV lacks required columns: {missing}")
        measure_columns = [c for c in reader.fieldnames
                           if c not in _RESERVED_COLUMNS]
        if not measure_columns:
            raise DataError("observations CSV has no measure columns")
        records: list[Observation] = []
        seen_keys: set[tuple[str, float, int]] = set()
        for row_no, row in enumerate(reader, start=2):
            try:
                group = row["group"]
                level = float(row["noise_level"])
                seed = int(row["seed"])
                accuracy = float(row["accuracy"])
                measures = {name: float(row[name]) for name in measure_columns}
            except (TypeError, ValueError) as exc:
                raise DataError(f"observations CSV row {row_no}: {exc}") from exc
            if not 0.0 <= accuracy <= 1.0:
                raise DataError(
                    f"observations CSV row {row_no}: accuracy {accuracy} "
                    "outside [0, 1]"
                )
            key = (group, level, seed)
            if key in seen_keys:
                raise DataError(
                    f"observations CSV row {row_no}: duplicate record for {key}"
                )
            seen_keys.add(key)
            records.append(Observation(group, level, seed, accuracy, measures))
        return cls(records=tuple(records))


def correlate_by_group(
    observations: ObservationSet, measure: str, method: str = T_APPROXIMATION
) -> tuple[dict[str, CorrelationResult], list[str]]:
    """One correlation per group between a measure column and accuracy.

    Groups with fewer than three records are skipped and reported in the
    returned warning list instead of failing the whole run.
    """
    grouped: dict[str, list[Observation]] = {}
    for record in observations.records:
        grouped.setdefault(record.group, []).append(record)
    results: dict[str, CorrelationResult] = {}
    warnings: list[str] = []
    for group, records in grouped.items():
        values = []
        for record in records:
            if measure not in record.measures:
                raise DataError(
                    f"group {group!r} lacks measure {measure!r} in some records"
                )
            values.append((record.measures[measure], record.accuracy))
        if len(values) < 3:
            warnings.append(
                f"group {group!r} skipped: only {len(values)} records, need 3"
            )
            continue
        xs = [value for value, _ in values]
        ys = [accuracy for _, accuracy in values]
        results[group] = spearman(xs, ys, method=method)
    return results, warnings

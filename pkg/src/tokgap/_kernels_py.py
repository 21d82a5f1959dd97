"""Pure-Python tokenization kernels.

Reference implementations of the two inner loops that dominate corpus
profiling. The compiled module in ``_kernels.pyx`` mirrors these exactly;
the test suite asserts that both produce identical output.
"""


def wordpiece_match(form: str, pieces: frozenset, marker: str, unk: str) -> list:
    """Greedy longest-match-first wordpiece split of a single word.

    At each position the longest vocabulary entry matching a prefix of the
    remainder is taken (continuation entries carry ``marker``). If no entry
    matches at some position, the whole word maps to ``unk``.
    """
    length = len(form)
    out = []
    start = 0
    while start < length:
        end = length
        found = None
        while end > start:
            piece = form[start:end]
            if start > 0:
                piece = marker + piece
            if piece in pieces:
                found = piece
                break
            end -= 1
        if found is None:
            return [unk]
        out.append(found)
        start = end
    return out


def bpe_apply(symbols: list, ranks: dict) -> list:
    """Apply merge rules to a symbol sequence, earliest-learned rule first.

    Repeatedly locates the present pair with the lowest rank and merges all
    its non-overlapping occurrences left to right, until no adjacent pair
    has a rule.
    """
    while len(symbols) >= 2:
        best_rank = -1
        best_pair = None
        for i in range(len(symbols) - 1):
            pair = (symbols[i], symbols[i + 1])
            rank = ranks.get(pair, -1)
            if rank != -1 and (best_rank == -1 or rank < best_rank):
                best_rank = rank
                best_pair = pair
        if best_pair is None:
            break
        first, second = best_pair
        merged = first + second
        out = []
        i = 0
        length = len(symbols)
        while i < length:
            if i < length - 1 and symbols[i] == first and symbols[i + 1] == second:
                out.append(merged)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    return symbols

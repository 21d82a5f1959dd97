# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled tokenization kernels.

Same contracts as ``_kernels_py``; kept line-for-line comparable so the
equivalence tests stay meaningful.
"""


def wordpiece_match(str form, frozenset pieces, str marker, str unk):
    cdef Py_ssize_t length = len(form)
    cdef Py_ssize_t start = 0
    cdef Py_ssize_t end
    cdef str piece, found
    out = []
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


def bpe_apply(list symbols, dict ranks):
    cdef Py_ssize_t i, length
    cdef long rank, best_rank
    cdef str first, second, merged
    while len(symbols) >= 2:
        best_rank = -1
        best_pair = None
        length = len(symbols)
        for i in range(length - 1):
            pair = (symbols[i], symbols[i + 1])
            value = ranks.get(pair)
            if value is not None:
                rank = value
                if best_rank == -1 or rank < best_rank:
                    best_rank = rank
                    best_pair = pair
        if best_pair is None:
            break
        first = <str> best_pair[0]
        second = <str> best_pair[1]
        merged = first + second
        out = []
        i = 0
        while i < length:
            if i < length - 1 and symbols[i] == first and symbols[i + 1] == second:
                out.append(merged)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    return symbols

"""Extended grapheme cluster segmentation.

Implements the Unicode text segmentation break rules (GB1-GB13, GB999) so
that editing and inventory operations work on user-perceived characters
instead of raw code points. Splitting inside a combining sequence would
produce forms that are not valid text in scripts with diacritics, which is
why every character-level operation in this package goes through here.

Break properties are derived from :mod:`unicodedata` general categories,
with the small fixed code point sets that the categories alone cannot
express hardcoded below (Unicode 15.0 data; the InCB linker rule added in
15.1 is not applied).
"""

import unicodedata
from bisect import bisect_right

_OTHER = 0
_CR = 1
_LF = 2
_CONTROL = 3
_EXTEND = 4
_ZWJ = 5
_REGIONAL = 6
_PREPEND = 7
_SPACINGMARK = 8
_HANGUL_L = 9
_HANGUL_V = 10
_HANGUL_T = 11
_HANGUL_LV = 12
_HANGUL_LVT = 13

# Grapheme_Extend code points outside the Mn/Me categories, plus the
# emoji modifiers and tag characters, which all glue onto the preceding
# cluster.
_EXTEND_EXTRA = frozenset(
    [
        0x09BE, 0x09D7, 0x0B3E, 0x0B57, 0x0BBE, 0x0BD7, 0x0CC2, 0x0CD5,
        0x0CD6, 0x0D3E, 0x0D57, 0x0DCF, 0x0DDF, 0x1715, 0x1734, 0x1B35,
        0x200C, 0x302E, 0x302F, 0xFF9E, 0xFF9F, 0x1133E, 0x11357, 0x114B0,
        0x114BD, 0x115AF, 0x11930, 0x1D165, 0x1D16E, 0x1D16F, 0x1D170,
        0x1D171, 0x1D172,
    ]
)

_PREPEND_POINTS = frozenset(
    [
        0x0600, 0x0601, 0x0602, 0x0603, 0x0604, 0x0605, 0x06DD, 0x070F,
        0x0890, 0x0891, 0x08E2, 0x0D4E, 0x110BD, 0x110CD, 0x111C2, 0x111C3,
        0x1193F, 0x11941, 0x11A3A, 0x11A84, 0x11A85, 0x11A86, 0x11A87,
        0x11A88, 0x11A89, 0x11D46, 0x11F02,
    ]
)

# Mc code points that do NOT get the SpacingMark break property.
_SPACINGMARK_EXCLUDED = frozenset(
    [
        0x102B, 0x102C, 0x1038, 0x1062, 0x1063, 0x1064, 0x1067, 0x1068,
        0x1069, 0x106A, 0x106B, 0x106C, 0x106D, 0x1083, 0x1087, 0x1088,
        0x1089, 0x108A, 0x108B, 0x108C, 0x108F, 0x109A, 0x109B, 0x109C,
        0x1A61, 0x1A63, 0x1A64, 0xAA7B, 0xAA7D, 0x11720, 0x11721,
    ]
)

# Lo code points that nevertheless break like spacing marks.
_SPACINGMARK_EXTRA = frozenset([0x0E33, 0x0EB3])

# Extended_Pictographic ranges from the Unicode emoji data, as inclusive
# (start, end) pairs sorted by start.
_PICTOGRAPHIC_RANGES = (
    (0x00A9, 0x00A9), (0x00AE, 0x00AE), (0x203C, 0x203C), (0x2049, 0x2049),
    (0x2122, 0x2122), (0x2139, 0x2139), (0x2194, 0x2199), (0x21A9, 0x21AA),
    (0x231A, 0x231B), (0x2328, 0x2328), (0x2388, 0x2388), (0x23CF, 0x23CF),
    (0x23E9, 0x23F3), (0x23F8, 0x23FA), (0x24C2, 0x24C2), (0x25AA, 0x25AB),
    (0x25B6, 0x25B6), (0x25C0, 0x25C0), (0x25FB, 0x25FE), (0x2600, 0x2605),
    (0x2607, 0x2612), (0x2614, 0x2685), (0x2690, 0x2705), (0x2708, 0x2712),
    (0x2714, 0x2714), (0x2716, 0x2716), (0x271D, 0x271D), (0x2721, 0x2721),
    (0x2728, 0x2728), (0x2733, 0x2734), (0x2744, 0x2744), (0x2747, 0x2747),
    (0x274C, 0x274C), (0x274E, 0x274E), (0x2753, 0x2755), (0x2757, 0x2757),
    (0x2763, 0x2767), (0x2795, 0x2797), (0x27A1, 0x27A1), (0x27B0, 0x27B0),
    (0x27BF, 0x27BF), (0x2934, 0x2935), (0x2B05, 0x2B07), (0x2B1B, 0x2B1C),
    (0x2B50, 0x2B50), (0x2B55, 0x2B55), (0x3030, 0x3030), (0x303D, 0x303D),
    (0x3297, 0x3297), (0x3299, 0x3299), (0x1F000, 0x1F0FF),
    (0x1F10D, 0x1F10F), (0x1F12F, 0x1F12F), (0x1F16C, 0x1F171),
    (0x1F17E, 0x1F17F), (0x1F18E, 0x1F18E), (0x1F191, 0x1F19A),
    (0x1F1AD, 0x1F1E5), (0x1F201, 0x1F20F), (0x1F21A, 0x1F21A),
    (0x1F22F, 0x1F22F), (0x1F232, 0x1F23A), (0x1F23C, 0x1F23F),
    (0x1F249, 0x1F3FA), (0x1F400, 0x1F53D), (0x1F546, 0x1F64F),
    (0x1F680, 0x1F6FF), (0x1F774, 0x1F77F), (0x1F7D5, 0x1F7FF),
    (0x1F80C, 0x1F80F), (0x1F848, 0x1F84F), (0x1F85A, 0x1F85F),
    (0x1F888, 0x1F88F), (0x1F8AE, 0x1F8FF), (0x1F90C, 0x1F93A),
    (0x1F93C, 0x1F945), (0x1F947, 0x1FAFF), (0x1FC00, 0x1FFFD),
)
_PICT_STARTS = tuple(lo for lo, _ in _PICTOGRAPHIC_RANGES)
_PICT_ENDS = tuple(hi for _, hi in _PICTOGRAPHIC_RANGES)

_prop_cache: dict[int, int] = {}
_pict_cache: dict[int, bool] = {}


def _is_pictographic(cp: int) -> bool:
    cached = _pict_cache.get(cp)
    if cached is None:
        i = bisect_right(_PICT_STARTS, cp) - 1
        cached = i >= 0 and cp <= _PICT_ENDS[i]
        _pict_cache[cp] = cached
    return cached


def _classify(cp: int) -> int:
    if cp == 0x000D:
        return _CR
    if cp == 0x000A:
        return _LF
    if cp == 0x200D:
        return _ZWJ
    if cp in _EXTEND_EXTRA or 0x1F3FB <= cp <= 0x1F3FF or 0xE0020 <= cp <= 0xE007F:
        return _EXTEND
    if 0x1F1E6 <= cp <= 0x1F1FF:
        return _REGIONAL
    if cp in _PREPEND_POINTS:
        return _PREPEND
    if cp in _SPACINGMARK_EXTRA:
        return _SPACINGMARK
    if 0x1100 <= cp <= 0x115F or 0xA960 <= cp <= 0xA97C:
        return _HANGUL_L
    if 0x1160 <= cp <= 0x11A7 or 0xD7B0 <= cp <= 0xD7C6:
        return _HANGUL_V
    if 0x11A8 <= cp <= 0x11FF or 0xD7CB <= cp <= 0xD7FB:
        return _HANGUL_T
    if 0xAC00 <= cp <= 0xD7A3:
        # Precomposed syllables alternate in blocks of 28: the block
        # leader is LV, the rest are LVT.
        return _HANGUL_LV if (cp - 0xAC00) % 28 == 0 else _HANGUL_LVT
    category = unicodedata.category(chr(cp))
    if category in ("Mn", "Me"):
        return _EXTEND
    if category == "Mc":
        return _OTHER if cp in _SPACINGMARK_EXCLUDED else _SPACINGMARK
    if category in ("Cc", "Cf", "Zl", "Zp", "Cs"):
        return _CONTROL
    return _OTHER


def _break_property(cp: int) -> int:
    cached = _prop_cache.get(cp)
    if cached is None:
        cached = _classify(cp)
        _prop_cache[cp] = cached
    return cached


def _is_boundary(prev: int, cur: int, cur_pict: bool,
                 zwj_follows_pictographic: bool, regional_run: int) -> bool:
    if prev == _CR and cur == _LF:
        return False
    if prev in (_CONTROL, _CR, _LF) or cur in (_CONTROL, _CR, _LF):
        return True
    if prev == _HANGUL_L and cur in (_HANGUL_L, _HANGUL_V, _HANGUL_LV, _HANGUL_LVT):
        return False
    if prev in (_HANGUL_LV, _HANGUL_V) and cur in (_HANGUL_V, _HANGUL_T):
        return False
    if prev in (_HANGUL_LVT, _HANGUL_T) and cur == _HANGUL_T:
        return False
    if cur in (_EXTEND, _ZWJ, _SPACINGMARK):
        return False
    if prev == _PREPEND:
        return False
    if prev == _ZWJ and cur_pict and zwj_follows_pictographic:
        return False
    if prev == _REGIONAL and cur == _REGIONAL and regional_run % 2 == 1:
        return False
    return True


def grapheme_clusters(text: str) -> list[str]:
    """Split ``text`` into extended grapheme clusters, in order."""
    if not text:
        return []
    clusters = []
    start = 0
    prev = _break_property(text[0])
    # True while the text consumed so far ends with a pictographic
    # character followed only by extend characters (the GB11 left context).
    emoji_run = _is_pictographic(ord(text[0]))
    zwj_follows_pictographic = False
    regional_run = 1 if prev == _REGIONAL else 0
    for i in range(1, len(text)):
        cp = ord(text[i])
        cur = _break_property(cp)
        cur_pict = _is_pictographic(cp)
        if _is_boundary(prev, cur, cur_pict, zwj_follows_pictographic, regional_run):
            clusters.append(text[start:i])
            start = i
        zwj_follows_pictographic = emoji_run if cur == _ZWJ else False
        if cur_pict:
            emoji_run = True
        elif not (cur == _EXTEND and emoji_run):
            emoji_run = False
        regional_run = regional_run + 1 if cur == _REGIONAL else 0
        prev = cur
    clusters.append(text[start:])
    return clusters


def grapheme_count(text: str) -> int:
    """Number of extended grapheme clusters in ``text``."""
    return len(grapheme_clusters(text))

"""Kernel selection: compiled extension when available, else pure Python.

Set ``TOKGAP_PURE=1`` to force the fallback, e.g. for benchmarking or to
rule the extension out when debugging.
"""

import os

from . import _kernels_py

if os.environ.get("TOKGAP_PURE"):
    _impl = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        COMPILED = True
    except ImportError:
        _impl = _kernels_py
        COMPILED = False

wordpiece_match = _impl.wordpiece_match
bpe_apply = _impl.bpe_apply

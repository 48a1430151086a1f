"""Pick the compiled kernel when it is importable, else the Python one.

Set ``GRIDFLOER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernel

BACKEND = "python"
kernel = _pykernel

if os.environ.get("GRIDFLOER_PURE_PYTHON") != "1":
    try:
        from . import _kernels as kernel  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        kernel = _pykernel

lex_rank = kernel.lex_rank
lex_unrank = kernel.lex_unrank
rectangles = kernel.rectangles

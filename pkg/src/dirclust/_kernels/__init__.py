"""Backend selection for the hot kernels.

The compiled Cython module is preferred when importable; the numpy
fallback is always available.  Set ``DIRCLUST_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the cross-backend tests).
"""

import os

from . import _pure

BACKEND = "python"
log_mean_exp_dots = _pure.log_mean_exp_dots
arc_min_log_mean_exp = _pure.arc_min_log_mean_exp

if not os.environ.get("DIRCLUST_PURE_PYTHON"):
    try:
        from . import _speedups

        log_mean_exp_dots = _speedups.log_mean_exp_dots
        arc_min_log_mean_exp = _speedups.arc_min_log_mean_exp
        BACKEND = "compiled"
    except ImportError:
        pass

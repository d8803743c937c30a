"""Backend selection for the oscillatory-sum hot kernel.

The compiled Cython kernel is preferred; the vectorised NumPy fallback is
used when the extension is unavailable or ``PLATELAB_PURE_PYTHON`` is set
to a non-empty value.  Both implement the same contract (see
``_oscsum_py.osc_trig_sum``), so everything above this module is
backend-agnostic.
"""

import os

from . import _oscsum_py

if os.environ.get("PLATELAB_PURE_PYTHON"):
    osc_trig_sum = _oscsum_py.osc_trig_sum
    BACKEND = "python"
else:
    try:
        from ._oscsum_cy import osc_trig_sum

        BACKEND = "compiled"
    except ImportError:  # extension not built
        osc_trig_sum = _oscsum_py.osc_trig_sum
        BACKEND = "python"

__all__ = ["osc_trig_sum", "BACKEND"]

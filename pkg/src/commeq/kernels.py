"""Backend selection for the closure kernel.

The compiled extension ``commeq._closure`` is used when it imports; otherwise
(or when ``COMMEQ_PURE_PYTHON=1``) the numpy fallback in ``_closure_py`` runs.
Both return identical results.
"""
import os

from . import _closure_py

try:
    from . import _closure as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _closure_py.power_closure}
if _compiled is not None:
    BACKENDS["cython"] = _compiled.power_closure

if _compiled is not None and not os.environ.get("COMMEQ_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"


def power_closure(n, k, tables, arities, gens, max_elems, max_steps=-1, backend=None):
    fn = BACKENDS[backend or BACKEND]
    return fn(int(n), int(k), list(tables), list(arities), gens, int(max_elems), int(max_steps))

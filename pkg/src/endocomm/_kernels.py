"""Kernel selection: compiled Hermite kernel when built, Python otherwise.

Both implementations are importable by name so tests and the benchmark can
compare them directly; :func:`hnf_mod` is the dispatching entry point.
"""
from ._hnf_py import hnf_mod as hnf_mod_py

try:
    from ._hnf import hnf_mod as hnf_mod_c
except ImportError:  # extension not built
    hnf_mod_c = None

BACKEND = "cython" if hnf_mod_c is not None else "python"


def hnf_mod(rows, ncols, modulus):
    """Hermite basis of ``span(rows) + modulus * Z^ncols`` (see ``_hnf_py``)."""
    if hnf_mod_c is not None and modulus < 2**31:
        try:
            return hnf_mod_c(rows, ncols, modulus)
        except OverflowError:
            # entries beyond int64; the exact path handles them
            pass
    if hasattr(rows, "tolist"):
        rows = rows.tolist()
    return hnf_mod_py(rows, ncols, modulus)

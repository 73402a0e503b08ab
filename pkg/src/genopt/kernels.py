"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the interpreted
fallback is used. Setting ``GENOPT_BACKEND=python`` forces the fallback at
import; ``use_backend`` switches explicitly (tests, benchmarks).
"""
import os

from genopt import _pykernels

try:
    from genopt import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels
if os.environ.get("GENOPT_BACKEND", "").lower() == "python":
    _active = _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend():
    return "cython" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name):
    """Select ``"cython"`` or ``"python"``; returns the previous backend name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    previous = backend()
    _active = _BACKENDS[name]
    return previous


def eliminate_rounds(keys, protected, n_keep, uniforms, q):
    return _active.eliminate_rounds(keys, protected, n_keep, uniforms, q)


def niche_counts(z, sigma, alpha):
    return _active.niche_counts(z, sigma, alpha)


def front_ranks(objs):
    return _active.front_ranks(objs)


def mean_pairwise_distance(z):
    return _active.mean_pairwise_distance(z)

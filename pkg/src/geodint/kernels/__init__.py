"""Hot-kernel backend selection.

The MLP forward/Jacobian chain is the inner loop of every solve on a
network generator, so it exists twice: a Cython extension
(``geodint.kernels._mlp_ext``) and a pure numpy fallback
(``geodint.kernels._purepy``). The compiled backend is preferred when
importable; ``GEODINT_BACKEND=pure`` (or ``compiled``) overrides, and
:func:`use` switches at runtime (used by tests and the benchmark).
"""

import os
from contextlib import contextmanager

from . import _purepy

ACT_CODES = {
    "identity": _purepy.ACT_IDENTITY,
    "tanh": _purepy.ACT_TANH,
    "relu": _purepy.ACT_RELU,
    "sigmoid": _purepy.ACT_SIGMOID,
}

try:
    from . import _mlp_ext  # compiled extension, optional
except ImportError:  # pragma: no cover - depends on build environment
    _mlp_ext = None

_BACKENDS = {"pure": _purepy}
if _mlp_ext is not None:
    _BACKENDS["compiled"] = _mlp_ext


def _initial_backend():
    forced = os.environ.get("GEODINT_BACKEND", "auto")
    if forced == "auto":
        return "compiled" if _mlp_ext is not None else "pure"
    if forced not in _BACKENDS:
        raise ImportError(
            f"GEODINT_BACKEND={forced!r} requested but that backend is "
            f"unavailable (have: {sorted(_BACKENDS)})"
        )
    return forced


_active = _initial_backend()


def available_backends():
    return sorted(_BACKENDS)


def active_backend():
    return _active


def use(name):
    """Select a kernel backend by name ('pure' or 'compiled')."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r} (have: {sorted(_BACKENDS)})")
    _active = name


@contextmanager
def forced_backend(name):
    prev = _active
    use(name)
    try:
        yield
    finally:
        use(prev)


def pack_all(weights, biases, acts):
    """Precompute per-backend layer packings; done once per generator."""
    return {name: mod.pack(weights, biases, acts) for name, mod in _BACKENDS.items()}


def mlp_forward(Z, packs):
    return _BACKENDS[_active].mlp_forward(Z, packs[_active])


def mlp_forward_jacobian(Z, packs):
    return _BACKENDS[_active].mlp_forward_jacobian(Z, packs[_active])

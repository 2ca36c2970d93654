"""Energy functionals on configurations.

All energies sum over *ordered* pairs ``i != j``, i.e. twice the sum over
unordered pairs.  Self inner products are excluded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .core import as_configuration, gram, lift_projective


class KernelDomainError(ValueError):
    """A pairwise value falls outside the kernel's domain."""


@dataclass(frozen=True)
class PFrame:
    """``|<x, y>|^p`` for ``p > 0``; ``p = inf`` means coherence."""

    p: float

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError(f"p must be positive, got {self.p}")


@dataclass(frozen=True)
class InnerSquareKernel:
    """``g(|<x, y>|^2)`` with ``g`` defined on ``[0, 1)`` (``[0, 1]`` if ``closed``)."""

    g: Callable[[np.ndarray], np.ndarray]
    closed: bool = True


@dataclass(frozen=True)
class ChordalKernel:
    """``f(||x - y||^2)`` with ``f`` defined on ``(0, 4 r^2]``."""

    f: Callable[[np.ndarray], np.ndarray]
    r: float = 1.0


@dataclass(frozen=True)
class EnergyValue:
    value: float
    kernel: object

    def __float__(self):
        return self.value


def _check_p(p):
    if not (p > 0):
        raise ValueError(f"p must be positive, got {p}")


def _offdiag(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    return m[~np.eye(n, dtype=bool)]


def fp_eval(config, p: float) -> float:
    """p-frame potential; ``p = inf`` returns the coherence."""
    _check_p(p)
    if math.isinf(p):
        return coherence(config)
    c = as_configuration(config)
    return float(kernels.energy(c.vectors, float(p)))


def coherence(config) -> float:
    """Largest ``|<x_i, x_j>|`` over ``i != j``."""
    return float(np.max(np.abs(_offdiag(gram(config)))))


def kernel_energy(config, kernel) -> EnergyValue:
    """Ordered-pair energy for any supported kernel."""
    if isinstance(kernel, PFrame):
        return EnergyValue(fp_eval(config, kernel.p), kernel)
    if isinstance(kernel, InnerSquareKernel):
        s = np.clip(_offdiag(gram(config)) ** 2, 0.0, 1.0)
        if not kernel.closed and np.any(s >= 1.0 - 1e-15):
            raise KernelDomainError("repeated or antipodal vectors: |<x,y>|^2 = 1 is outside [0, 1)")
        vals = np.asarray(kernel.g(s), dtype=float)
        return EnergyValue(_checked_sum(vals), kernel)
    if isinstance(kernel, ChordalKernel):
        return EnergyValue(chordal_energy(as_configuration(config).vectors, kernel), kernel)
    raise TypeError(f"unsupported kernel {kernel!r}")


def chordal_energy(points: np.ndarray, kernel: ChordalKernel) -> float:
    """``sum_{i != j} f(||y_i - y_j||^2)`` for arbitrary points (not necessarily unit)."""
    y = np.asarray(points, dtype=float).reshape(len(points), -1)
    sq = np.sum(y * y, axis=1)
    dist2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0)
    vals = _offdiag(dist2)
    hi = 4.0 * kernel.r**2 * (1.0 + 1e-12)
    if np.any(vals <= 0.0) or np.any(vals > hi):
        raise KernelDomainError(f"squared distances must lie in (0, {4 * kernel.r ** 2}]")
    return _checked_sum(np.asarray(kernel.f(vals), dtype=float))


def lifted_energy(config, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """Evaluate ``sum g(|<x_i,x_j>|^2)`` as the chordal energy ``f(t) = g(1 - t/2)``
    of the lifted points ``x x^T`` (Frobenius geometry)."""
    lifted = lift_projective(config)
    kernel = ChordalKernel(lambda t: g(1.0 - t / 2.0), r=1.0 / math.sqrt(2.0))
    return chordal_energy(lifted.reshape(len(lifted), -1), kernel)


def _checked_sum(vals):
    if not np.all(np.isfinite(vals)):
        raise KernelDomainError("kernel returned non-finite values")
    return float(vals.sum())


def gp_kernel(p: float) -> InnerSquareKernel:
    """``g_p(s) = s^{p/2}``, which reproduces the p-frame potential."""
    _check_p(p)
    return InnerSquareKernel(lambda s: np.power(s, p / 2.0))


def pfp_discrete(config, p: float) -> float:
    """Probabilistic p-frame potential of the normalized counting measure."""
    c = as_configuration(config)
    return (fp_eval(c, p) + c.n) / c.n**2

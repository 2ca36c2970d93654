"""Spherical design and sharp-configuration checks via monomial moments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .core import as_configuration, gram

MONOMIAL_CAP = 10**6


@dataclass(frozen=True)
class DesignReport:
    requested: int
    max_strength: int
    worst_residual: float
    residual_by_degree: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return self.max_strength >= self.requested

    def to_dict(self):
        return {
            "requested": self.requested,
            "max_strength": self.max_strength,
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "residual_by_degree": list(self.residual_by_degree),
        }


@dataclass(frozen=True)
class SharpReport:
    is_sharp: bool
    m: int
    inner_products: tuple
    design_strength_needed: int
    design: DesignReport


def _double_factorial_odd(k: int) -> int:
    """``(k-1)!!`` for even ``k`` (``1*3*...*(k-1)``); 1 for ``k = 0``."""
    out = 1
    for j in range(1, k, 2):
        out *= j
    return out


def sphere_moment_exact(d: int, alpha) -> Fraction:
    """Average of ``prod x_i^alpha_i`` over ``S^{d-1}`` as an exact fraction."""
    alpha = tuple(int(a) for a in alpha)
    if d < 2 or len(alpha) != d or any(a < 0 for a in alpha):
        raise ValueError("alpha must be a length-d multi-index of nonnegative integers, d >= 2")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = 1
    for a in alpha:
        num *= _double_factorial_odd(a)
    den = 1
    for j in range(sum(alpha) // 2):
        den *= d + 2 * j
    return Fraction(num, den)


def sphere_moment(d: int, alpha) -> float:
    return float(sphere_moment_exact(d, alpha))


def monomial_count(d: int, t: int) -> int:
    """Number of monomials in ``d`` variables of total degree ``<= t``."""
    return math.comb(t + d, d)


def _exponents(d: int, degree: int) -> np.ndarray:
    rows = []
    for combo in combinations_with_replacement(range(d), degree):
        e = [0] * d
        for c in combo:
            e[c] += 1
        rows.append(e)
    return np.array(rows, dtype=int).reshape(-1, d)


def design_check(config, t: int, tol: float = 1e-10, cap: int = MONOMIAL_CAP) -> DesignReport:
    """Compare sample averages of every monomial of degree ``<= t`` with sphere moments."""
    c = as_configuration(config)
    if t < 1:
        raise ValueError("t must be >= 1")
    if monomial_count(c.dim, t) > cap:
        raise ValueError(f"{monomial_count(c.dim, t)} monomials exceed the cap of {cap}")
    x = c.vectors
    powers = x[None, :, :] ** np.arange(t + 1)[:, None, None]  # (t+1, N, d)
    per_degree = []
    for degree in range(1, t + 1):
        worst = 0.0
        exps = _exponents(c.dim, degree)
        for chunk in np.array_split(exps, max(1, len(exps) // 4096)):
            vals = np.ones((len(chunk), c.n))
            for k in range(c.dim):
                vals *= powers[chunk[:, k], :, k]
            averages = vals.mean(axis=1)
            exact = np.array([sphere_moment(c.dim, e) for e in chunk])
            worst = max(worst, float(np.max(np.abs(averages - exact))))
        per_degree.append(worst)
    strength = 0
    for degree, r in enumerate(per_degree, start=1):
        if r > tol:
            break
        strength = degree
    return DesignReport(t, strength, max(per_degree), tuple(per_degree))


def distinct_inner_products(config, tol: float = 1e-7) -> list[float]:
    """Cluster ``<x_i, x_j>`` (``i < j``, coincident points excluded) by sorted gap splitting."""
    g = gram(config)
    iu = np.triu_indices(g.shape[0], k=1)
    vals = np.sort(g[iu])
    vals = vals[vals < 1.0 - tol]
    if vals.size == 0:
        return []
    groups = np.split(vals, np.nonzero(np.diff(vals) > tol)[0] + 1)
    return [float(np.mean(gr)) for gr in groups]


def sharp_check(config, tol: float = 1e-7, design_tol: float = 1e-10) -> SharpReport:
    """An ``m``-sharp configuration has ``m`` distinct inner products and is a ``(2m-1)``-design."""
    products = distinct_inner_products(config, tol)
    m = len(products)
    needed = max(2 * m - 1, 1)
    report = design_check(config, needed, design_tol)
    return SharpReport(m >= 1 and report.passed, m, tuple(products), needed, report)

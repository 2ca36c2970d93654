"""Linear-programming lower bounds from Hermite interpolation.

For a kernel ``a`` on ``[-1, 1)`` and a polynomial ``h <= a`` that is positive
definite on ``S^{d-1}`` (nonnegative Gegenbauer coefficients ``c_k``), every
``N``-point configuration satisfies

    sum_{i != j} a(<x_i, x_j>) >= N^2 c_0 - N h(1).

Taking ``h`` to be the Hermite interpolant of ``a`` matching value and first
derivative at the inner products of a candidate makes the bound tight when
the candidate is a sharp configuration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import solve_triangular

from .constructions import half_circle
from .core import projective_circle
from .designs import distinct_inner_products
from .potentials import fp_eval

PD_TOL = 1e-12


class DerivativeUnavailable(ValueError):
    """A required derivative does not exist (or is infinite) at a node."""


# -- smooth functions -------------------------------------------------------

class PolynomialFunction:
    """A polynomial exposed through the ``f(t, order)`` interface."""

    def __init__(self, poly):
        self.poly = poly if isinstance(poly, Polynomial) else Polynomial(poly)
        self._derivs = [self.poly]

    def __call__(self, t, order: int = 0):
        while len(self._derivs) <= order:
            self._derivs.append(self._derivs[-1].deriv())
        return self._derivs[order](t)


class PowerKernel:
    """``(offset + slope * u) ** q`` with closed-form derivatives.

    ``transported_pframe(p)`` is the instance ``((1 + u)/2) ** (p/2)``, i.e.
    ``|t|^p`` written in terms of ``u = 2 t^2 - 1``.
    """

    def __init__(self, q: float, offset: float = 0.5, slope: float = 0.5):
        self.q, self.offset, self.slope = float(q), float(offset), float(slope)

    def __call__(self, t, order: int = 0):
        base = self.offset + self.slope * np.asarray(t, dtype=float)
        coef = 1.0
        for j in range(order):
            coef *= self.q - j
        coef *= self.slope**order
        expo = self.q - order
        if coef == 0.0:
            return np.zeros_like(base) if np.ndim(base) else 0.0
        if np.any(base < 0) and not expo.is_integer():
            raise DerivativeUnavailable("power kernel evaluated outside its domain")
        if expo < 0 and np.any(base == 0):
            raise DerivativeUnavailable(f"derivative of order {order} is infinite at the domain boundary")
        with np.errstate(divide="ignore"):
            out = coef * np.power(base, expo)
        return out if np.ndim(out) else float(out)


def transported_pframe(p: float) -> PowerKernel:
    """Kernel ``a(u) = ((1+u)/2)^{p/2}`` on the projective circle."""
    if not p > 0:
        raise ValueError("p must be positive")
    return PowerKernel(p / 2.0)


class FunctionWithDerivatives:
    """Wrap ``fn(t, order)``; convenient for analytic test kernels."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, t, order: int = 0):
        return self.fn(t, order)


# -- node sets and divided differences ------------------------------------

@dataclass(frozen=True)
class NodeSet:
    """Roots of the monic polynomial ``g = prod (t - t_i)^{m_i}``."""

    nodes: tuple  # ((t_i, m_i), ...)

    def __post_init__(self):
        items = tuple((float(t), int(m)) for t, m in self.nodes)
        if not items:
            raise ValueError("node set is empty")
        ts = [t for t, _ in items]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("nodes must be strictly increasing")
        if any(m < 1 for _, m in items):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "nodes", items)

    @classmethod
    def squared(cls, values) -> "NodeSet":
        """Each value with multiplicity two, i.e. ``g = F^2``."""
        return cls(tuple((v, 2) for v in sorted(values)))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.nodes)

    def points(self) -> list[float]:
        return [t for t, m in self.nodes for _ in range(m)]

    def polynomial(self) -> Polynomial:
        out = Polynomial([1.0])
        for t, m in self.nodes:
            out = out * Polynomial([-t, 1.0]) ** m
        return out

    def __mul__(self, other: "NodeSet") -> "NodeSet":
        merged: dict[float, int] = {}
        for t, m in self.nodes + other.nodes:
            merged[t] = merged.get(t, 0) + m
        return NodeSet(tuple(sorted(merged.items())))


def divided_differences(f, points) -> np.ndarray:
    """Newton coefficients ``f[z_0], f[z_0,z_1], ..., f[z_0..z_{n-1}]``.

    ``points`` must list repeated nodes contiguously; a run of ``j+1`` equal
    points uses ``f^{(j)}(z) / j!``.
    """
    z = np.asarray(points, dtype=float)
    n = len(z)
    col = np.array([f(zi, 0) for zi in z], dtype=float)
    coeffs = [col[0]]
    for j in range(1, n):
        nxt = np.empty(n - j)
        for i in range(n - j):
            if z[i + j] == z[i]:
                nxt[i] = f(z[i], j) / math.factorial(j)
            else:
                nxt[i] = (col[i + 1] - col[i]) / (z[i + j] - z[i])
        col = nxt
        coeffs.append(col[0])
    return np.array(coeffs)


def _newton_to_poly(coeffs, points) -> Polynomial:
    out = Polynomial([coeffs[-1]])
    for c, z in zip(coeffs[-2::-1], points[len(coeffs) - 2::-1]):
        out = out * Polynomial([-z, 1.0]) + c
    return out


def hermite_interpolant(a, g: NodeSet) -> Polynomial:
    """Polynomial of degree ``< deg g`` agreeing with ``a`` to each root's order."""
    pts = g.points()
    return _newton_to_poly(divided_differences(a, pts), pts)


class HermiteQuotient:
    """``Q(a, g) = (a - H(a, g)) / g``, evaluated as the divided difference
    ``a[z_1, ..., z_n, t]`` so values at the nodes are the removable limits.

    Derivatives follow from ``Q^{(k)}(t) = k! a[z_1..z_n, t, ..., t]`` with
    ``t`` repeated ``k + 1`` times.
    """

    SNAP = 1e-13

    def __init__(self, a, g: NodeSet):
        self.a, self.g = a, g
        self._pts = g.points()
        self._nodes = np.array([t for t, _ in g.nodes])

    def _scalar(self, t: float, order: int) -> float:
        near = np.abs(self._nodes - t) <= self.SNAP * max(1.0, abs(t))
        if np.any(near):
            t = float(self._nodes[np.argmax(near)])
        pts = sorted(self._pts + [t] * (order + 1))
        return math.factorial(order) * divided_differences(self.a, pts)[-1]

    def __call__(self, t, order: int = 0):
        if np.ndim(t) == 0:
            return self._scalar(float(t), order)
        return np.array([self._scalar(float(v), order) for v in np.ravel(t)]).reshape(np.shape(t))


def hermite_quotient(a, g: NodeSet) -> HermiteQuotient:
    return HermiteQuotient(a, g)


# -- Gegenbauer expansion --------------------------------------------------

def gegenbauer_basis(d: int, degree: int) -> list[Polynomial]:
    """``G_0..G_degree`` for ``S^{d-1}`` normalized to ``G_k(1) = 1``.

    ``d = 2`` gives Chebyshev polynomials of the first kind, ``d = 3``
    Legendre polynomials.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    lam = (d - 2) / 2.0
    t = Polynomial([0.0, 1.0])
    basis = [Polynomial([1.0])]
    if degree >= 1:
        basis.append(t)
    for k in range(1, degree):
        nxt = ((2 * k + 2 * lam) / (k + 2 * lam)) * t * basis[k] - (k / (k + 2 * lam)) * basis[k - 1]
        basis.append(nxt)
    return basis[: degree + 1]


def gegenbauer_expand(h, d: int) -> np.ndarray:
    """Coefficients ``c_k`` with ``h = sum c_k G_k`` (triangular change of basis)."""
    h = h if isinstance(h, Polynomial) else Polynomial(h)
    coef = h.coef
    deg = len(coef) - 1
    basis = gegenbauer_basis(d, deg)
    m = np.zeros((deg + 1, deg + 1))
    for k, b in enumerate(basis):
        m[: len(b.coef), k] = b.coef
    return solve_triangular(m, coef, lower=False)


def gegenbauer_eval(coeffs, d: int, t):
    basis = gegenbauer_basis(d, len(coeffs) - 1)
    return sum(c * b(t) for c, b in zip(coeffs, basis))


# -- certificates ----------------------------------------------------------

@dataclass
class Certificate:
    interpolant: Polynomial
    expansion_coeffs: np.ndarray
    lower_bound: float
    pointwise_ok: bool
    pd_ok: bool
    dim: int
    n: int
    nodes: NodeSet
    max_violation: float = 0.0
    witness: float | None = None
    offending_index: int | None = None
    achieved: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.pointwise_ok and self.pd_ok

    @property
    def gap(self) -> float | None:
        return None if self.achieved is None else self.achieved - self.lower_bound

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "valid": self.valid,
            "lower_bound": self.lower_bound,
            "achieved": self.achieved,
            "gap": self.gap,
            "pointwise_ok": self.pointwise_ok,
            "pd_ok": self.pd_ok,
            "max_violation": self.max_violation,
            "witness": self.witness,
            "offending_index": self.offending_index,
            "nodes": [list(n) for n in self.nodes.nodes],
            "interpolant": self.interpolant.coef.tolist(),
            "expansion_coeffs": np.asarray(self.expansion_coeffs).tolist(),
            **self.extra,
        }


def _check_grid(nodes: NodeSet, points: int, delta: float) -> np.ndarray:
    hi = 1.0 - delta
    grid = [np.linspace(-1.0, hi, points)]
    for t, _ in nodes.nodes:
        offs = t + np.array([0.0, -1e-2, -1e-3, -1e-4, -1e-6, 1e-6, 1e-4, 1e-3, 1e-2])
        grid.append(offs[(offs >= -1.0) & (offs <= hi)])
    return np.unique(np.concatenate(grid))


def lp_certify(a, n: int, d: int, nodes, grid_points: int = 10_000, delta: float = 1e-9,
               pointwise_tol: float = 1e-10, pd_tol: float = PD_TOL) -> Certificate:
    """Certify ``sum_{i != j} a(<x_i,x_j>) >= N^2 c_0 - N h(1)`` with ``h = H(a, F^2)``.

    ``nodes`` is a ``NodeSet`` or the candidate's distinct inner products
    (each then taken with multiplicity two).
    """
    if not isinstance(nodes, NodeSet):
        nodes = NodeSet.squared(nodes)
    if any(not -1.0 <= t < 1.0 for t, _ in nodes.nodes):
        raise ValueError("nodes must lie in [-1, 1)")
    h = hermite_interpolant(a, nodes)
    coeffs = gegenbauer_expand(h, d)
    negative = np.nonzero(coeffs < -pd_tol)[0]
    pd_ok = negative.size == 0

    grid = _check_grid(nodes, grid_points, delta)
    diff = h(grid) - np.asarray(a(grid), dtype=float)
    scale = max(1.0, float(np.max(np.abs(h(grid)))))
    worst = int(np.argmax(diff))
    pointwise_ok = bool(diff[worst] <= pointwise_tol * scale)

    lower = n * n * float(coeffs[0]) - n * float(h(1.0))
    return Certificate(
        interpolant=h, expansion_coeffs=coeffs, lower_bound=lower, pointwise_ok=pointwise_ok,
        pd_ok=pd_ok, dim=d, n=n, nodes=nodes, max_violation=max(0.0, float(diff[worst])),
        witness=None if pointwise_ok else float(grid[worst]),
        offending_index=None if pd_ok else int(negative[0]),
    )


def projective_nodes(n: int, tol: float = 1e-9) -> list[float]:
    """Distinct inner products of the half-circle candidate after lifting to the unit circle."""
    vals = distinct_inner_products(projective_circle(half_circle(n)), tol)
    return [min(max(v, -1.0), 1.0 - 1e-15) for v in vals]


def certify_half_circle(n: int, p: float, **kwargs) -> Certificate:
    """LP certificate for the half-circle configuration and FP_p in ``R^2``.

    The lift ``x -> x x^T`` maps lines in ``R^2`` to a circle on which inner
    products become ``u = 2 t^2 - 1``; the p-frame kernel becomes
    ``((1+u)/2)^{p/2}``.  Even ``p`` gives an absolutely monotone kernel, so the
    certificate is valid and the gap vanishes when ``p`` stays within the
    interpolation degree.
    """
    if n < 2:
        raise ValueError("N must be >= 2")
    if not p > 0 or math.isinf(p):
        raise ValueError("p must be positive and finite")
    cert = lp_certify(transported_pframe(p), n, 2, projective_nodes(n), **kwargs)
    cert.achieved = fp_eval(half_circle(n), p)
    cert.extra = {"p": p, "candidate": "half_circle"}
    return cert

"""Configurations of unit vectors, Gram matrices and the projective lift.

A configuration holds ``N`` unit vectors of ``R^d`` as the rows of an
``(N, d)`` array; the synthesis matrix is its transpose (vectors as columns).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

NORM_TOL = 1e-12
RENORMALIZE_TOL = 1e-6


class ConfigurationError(ValueError):
    """Raised for malformed configurations."""


@dataclass(frozen=True, eq=False)
class Configuration:
    """Ordered list of ``N >= 2`` unit vectors in ``R^d`` with ``d >= 2``.

    Input rows within ``1e-6`` of unit norm are renormalized; anything else
    is rejected.
    """

    vectors: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = np.array(self.vectors, dtype=float, copy=True)
        if x.ndim != 2:
            raise ConfigurationError("vectors must form a 2-D array (N, d)")
        n, d = x.shape
        if n < 2 or d < 2:
            raise ConfigurationError(f"need N >= 2 and d >= 2, got N={n}, d={d}")
        if not np.all(np.isfinite(x)):
            raise ConfigurationError("vectors contain non-finite entries")
        norms = np.linalg.norm(x, axis=1)
        bad = np.abs(norms - 1.0) > RENORMALIZE_TOL
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ConfigurationError(f"vector {i} has norm {norms[i]!r}, not within {RENORMALIZE_TOL} of 1")
        x /= norms[:, None]
        x.setflags(write=False)
        object.__setattr__(self, "vectors", x)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def synthesis(self) -> np.ndarray:
        """``d x N`` synthesis matrix, one column per vector."""
        return self.vectors.T

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Configuration(n={self.n}, dim={self.dim})"

    def transformed(self, orthogonal=None, perm=None, signs=None) -> "Configuration":
        """Apply an element of the equivalence group (rotation, permutation, sign flips)."""
        x = np.array(self.vectors)
        if orthogonal is not None:
            x = x @ np.asarray(orthogonal, dtype=float).T
        if perm is not None:
            x = x[np.asarray(perm)]
        if signs is not None:
            x = x * np.asarray(signs, dtype=float)[:, None]
        return Configuration(x)

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "n": self.n,
            "vectors": [[float(v) for v in row] for row in self.vectors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Configuration":
        try:
            vectors = np.asarray(data["vectors"], dtype=float)
            dim, n = int(data["dim"]), int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed configuration record: {exc}") from None
        if vectors.shape != (n, dim):
            raise ConfigurationError(f"declared shape ({n}, {dim}) but vectors have shape {vectors.shape}")
        return cls(vectors)

    def to_json(self) -> str:
        # repr-based float formatting round-trips doubles exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "Configuration":
        return cls.from_json(Path(path).read_text())


def as_configuration(x) -> Configuration:
    return x if isinstance(x, Configuration) else Configuration(x)


def gram(config) -> np.ndarray:
    """Matrix of pairwise inner products ``<x_i, x_j>``."""
    x = as_configuration(config).vectors
    return x @ x.T


def lift_projective(config) -> np.ndarray:
    """Return the ``(N, d, d)`` stack of rank-one projections ``x x^T``.

    Frobenius inner products of the lifted points are ``<x, y>^2`` and their
    squared distances are ``2 - 2 <x, y>^2``.
    """
    x = as_configuration(config).vectors
    return np.einsum("ni,nj->nij", x, x)


def lift_coordinates(config) -> np.ndarray:
    """Isometric coordinates ``(x1^2, sqrt(2) x1 x2, x2^2)`` of the lift for ``d = 2``."""
    c = as_configuration(config)
    if c.dim != 2:
        raise ConfigurationError("explicit lift coordinates exist only for d = 2")
    x1, x2 = c.vectors[:, 0], c.vectors[:, 1]
    return np.column_stack([x1 * x1, np.sqrt(2.0) * x1 * x2, x2 * x2])


LIFT_CENTER = np.array([0.5, 0.0, 0.5])
LIFT_RADIUS = 1.0 / np.sqrt(2.0)


def projective_circle(config) -> Configuration:
    """Map a planar configuration onto the unit circle through its lift.

    The lift of ``S^1`` is a circle of radius ``1/sqrt(2)`` centred at
    ``(1/2, 0, 1/2)``; recentring and rescaling it gives the point
    ``(x1^2 - x2^2, 2 x1 x2)``, i.e. the doubled angle.  Inner products
    transform as ``u = 2 t^2 - 1``.
    """
    c = as_configuration(config)
    if c.dim != 2:
        raise ConfigurationError("the projective circle is defined for d = 2 only")
    x1, x2 = c.vectors[:, 0], c.vectors[:, 1]
    return Configuration(np.column_stack([x1 * x1 - x2 * x2, 2.0 * x1 * x2]))


def frame_operator(config) -> np.ndarray:
    """``S = sum_k x_k x_k^T``; tight frames have ``S = (N/d) I``."""
    s = as_configuration(config).synthesis
    return s @ s.T


def tightness_defect(config) -> float:
    c = as_configuration(config)
    return float(np.linalg.norm(frame_operator(c) - (c.n / c.dim) * np.eye(c.dim)))


def is_frame(config, tol: float = 1e-8) -> bool:
    """True iff the synthesis matrix has smallest singular value above ``tol``."""
    c = as_configuration(config)
    if c.n < c.dim:
        return False
    sv = np.linalg.svd(c.synthesis, compute_uv=False)
    return bool(sv[-1] > tol)


def canonical_invariant(config) -> np.ndarray:
    """Sorted ``|<x_i, x_j>|`` over ``i < j``.

    Equal for configurations related by orthogonal maps, permutations and
    sign flips.  The converse does not hold in general, so matching
    invariants is only a necessary condition for equivalence.
    """
    g = gram(config)
    iu = np.triu_indices(g.shape[0], k=1)
    return np.sort(np.abs(g[iu]))


def invariants_match(a, b, tol: float = 1e-8) -> bool:
    ia = a if isinstance(a, np.ndarray) else canonical_invariant(a)
    ib = b if isinstance(b, np.ndarray) else canonical_invariant(b)
    return ia.shape == ib.shape and bool(np.all(np.abs(ia - ib) <= tol))


def invariant_digest(config, decimals: int = 6) -> str:
    """Short hash of the rounded canonical invariant, for spotting structural changes."""
    inv = np.round(canonical_invariant(config), decimals) + 0.0  # drop -0.0
    text = ",".join(f"{v:.{decimals}f}" for v in inv)
    return hashlib.sha256(text.encode()).hexdigest()[:12]

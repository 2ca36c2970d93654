"""Exact constructions of the named configurations."""
from __future__ import annotations

import numpy as np

from .core import Configuration, ConfigurationError, as_configuration, canonical_invariant

RNG_ALGORITHM = "numpy.random.PCG64"

KINDS = ("half-circle", "full-circle", "onb-copies", "onb-plus", "simplex", "lifted-etf", "symmetrized", "random")


def half_circle(n: int) -> Configuration:
    """``n`` equally spaced lines: angles ``k pi / n`` for ``k = 0..n-1``."""
    if n < 2:
        raise ConfigurationError("half_circle needs N >= 2")
    theta = np.pi * np.arange(n) / n
    return Configuration(np.column_stack([np.cos(theta), np.sin(theta)]))


def full_circle(n: int) -> Configuration:
    """``n`` equally spaced points on the unit circle."""
    if n < 2:
        raise ConfigurationError("full_circle needs N >= 2")
    theta = 2.0 * np.pi * np.arange(n) / n
    return Configuration(np.column_stack([np.cos(theta), np.sin(theta)]))


def onb_copies(d: int, k: int) -> Configuration:
    if d < 2 or k < 1:
        raise ConfigurationError("onb_copies needs d >= 2 and k >= 1")
    return Configuration(np.tile(np.eye(d), (k, 1)))


def onb_plus(d: int) -> Configuration:
    """Canonical basis of ``R^d`` followed by a second copy of ``e_1``."""
    if d < 2:
        raise ConfigurationError("onb_plus needs d >= 2")
    e = np.eye(d)
    return Configuration(np.vstack([e, e[:1]]))


def _simplex_rows(n: int) -> np.ndarray:
    # project e_1..e_{n+1} onto the complement of the all-ones vector, then
    # express the result in an orthonormal basis of that n-dim complement
    m = n + 1
    proj = np.eye(m) - np.full((m, m), 1.0 / m)
    # orthonormal basis of 1^perp: the first n right-singular directions of proj
    _, _, vt = np.linalg.svd(proj)
    basis = vt[:n]
    rows = proj @ basis.T
    return rows / np.linalg.norm(rows, axis=1)[:, None]


def simplex(n: int) -> Configuration:
    """``n + 1`` unit vectors in ``R^n`` with all inner products ``-1/n``."""
    if n < 2:
        raise ConfigurationError("simplex needs n >= 2")
    return Configuration(_simplex_rows(n))


def lifted_etf(d: int, k: int) -> Configuration:
    """Block configuration with the ``k``-simplex in the first ``k``
    coordinates and ``e_{k+1}, ..., e_d`` appended; ``d + 1`` vectors.

    ``k = 1`` is the ONB with ``e_1`` repeated (up to sign), ``k = d`` the simplex.
    """
    if d < 2 or not 1 <= k <= d:
        raise ConfigurationError(f"lifted_etf needs 1 <= k <= d, got d={d}, k={k}")
    rows = np.zeros((d + 1, d))
    if k == 1:
        # the 1-simplex is {1, -1}
        rows[0, 0], rows[1, 0] = 1.0, -1.0
    else:
        rows[: k + 1, :k] = _simplex_rows(k)
    rows[k + 1 :, k:] = np.eye(d - k)
    return Configuration(rows)


def symmetrize(config) -> Configuration:
    """``X`` followed by ``-X``; requires coherence below 1."""
    c = as_configuration(config)
    if canonical_invariant(c)[-1] >= 1.0 - 1e-12:
        raise ConfigurationError("cannot symmetrize: configuration has repeated or antipodal vectors")
    return Configuration(np.vstack([c.vectors, -c.vectors]))


def random_uniform(n: int, d: int, seed=None) -> Configuration:
    """``n`` i.i.d. uniform points on ``S^{d-1}`` (normalized Gaussians)."""
    if n < 2 or d < 2:
        raise ConfigurationError("random_uniform needs N >= 2 and d >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    x = rng.standard_normal((n, d))
    x /= np.linalg.norm(x, axis=1)[:, None]
    meta = {"rng": RNG_ALGORITHM}
    if not isinstance(seed, np.random.Generator):
        meta["seed"] = seed
    return Configuration(x, metadata=meta)


def build(kind: str, n: int | None = None, d: int | None = None, k: int | None = None, seed=None) -> Configuration:
    """Dispatch on a kind name, as used by the command line."""
    kind = kind.replace("_", "-").lower()
    if kind == "half-circle":
        return half_circle(_need(n, "n"))
    if kind == "full-circle":
        return full_circle(_need(n, "n"))
    if kind == "onb-copies":
        return onb_copies(_need(d, "d"), _need(k, "k"))
    if kind == "onb-plus":
        return onb_plus(_need(d, "d"))
    if kind == "simplex":
        return simplex(_need(d if d is not None else n, "d"))
    if kind == "lifted-etf":
        return lifted_etf(_need(d, "d"), _need(k, "k"))
    if kind == "symmetrized":
        return symmetrize(half_circle(_need(n, "n")))
    if kind == "random":
        return random_uniform(_need(n, "n"), _need(d, "d"), seed)
    raise ConfigurationError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


def _need(value, name):
    if value is None:
        raise ConfigurationError(f"--{name} is required for this kind")
    return value

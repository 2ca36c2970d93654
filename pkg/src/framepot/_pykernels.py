"""Reference numpy implementation of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable (or when
``FRAMEPOT_PURE=1``).  Semantics must match ``_kernels.pyx`` exactly.
"""
import numpy as np

TINY = 1e-300
MAX_STEP = 1e12

# descend() status codes
CONVERGED = 0
MAX_ITERS = 1
LINE_SEARCH_FAILED = 2
NON_FINITE = 3


def _pair_terms(x, p, eps):
    t = x @ x.T
    np.fill_diagonal(t, 0.0)
    if eps > 0.0:
        base = np.sqrt(t * t + eps * eps)
    else:
        base = np.abs(t)
    np.fill_diagonal(base, 0.0)
    return t, base


def energy(x, p, eps=0.0):
    """Ordered-pair sum of ``|<x_i, x_j>|^p`` (or its smoothed form)."""
    _, base = _pair_terms(np.asarray(x, dtype=float), p, eps)
    vals = np.power(base, p)
    np.fill_diagonal(vals, 0.0)
    vals[vals < TINY] = 0.0
    return float(vals.sum())


def energy_grad(x, p, eps=0.0, zero_cut=1e-12, cap=1e8):
    """Energy and its Euclidean gradient with respect to every vector."""
    x = np.asarray(x, dtype=float)
    t, base = _pair_terms(x, p, eps)
    vals = np.power(base, p)
    np.fill_diagonal(vals, 0.0)
    vals[vals < TINY] = 0.0
    e = float(vals.sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        if eps > 0.0:
            # d/dt (t^2 + eps^2)^{p/2} = p t (t^2 + eps^2)^{p/2 - 1}
            w = np.power(base, p - 2.0) * t
        else:
            w = np.minimum(np.power(base, p - 1.0), cap) * np.sign(t)
            w[base < zero_cut] = 0.0
    np.fill_diagonal(w, 0.0)
    w = np.nan_to_num(w, nan=0.0, posinf=0.0, neginf=0.0)
    return e, 2.0 * p * (w @ x)


def _objective(x, p, eps, zero_cut, cap, log_objective):
    e, g = energy_grad(x, p, eps, zero_cut, cap)
    if log_objective:
        if e <= 0.0:
            return -np.inf, np.zeros_like(g), e
        return np.log(e) / p, g / (p * e), e
    return e, g, e


def _value(x, p, eps, log_objective):
    e = energy(x, p, eps)
    if log_objective:
        return (np.log(e) / p if e > 0.0 else -np.inf), e
    return e, e


def _bad(f):
    # -inf is legal for the log objective (all inner products vanish)
    return np.isnan(f) or f == np.inf


def descend(x0, p, eps=0.0, max_iters=5000, step_init=0.1, beta=0.5, c=1e-4,
            grad_tol=1e-10, zero_cut=1e-12, cap=1e8, log_objective=False):
    """Projected gradient descent with Armijo backtracking on a product of spheres.

    Each trial point is ``normalize(x - a * r)`` where ``r`` is the gradient
    with its radial part removed.  The trial step starts from twice the last
    accepted step (first iteration: ``step_init``).

    Returns ``(x, energy, iterations, status)``; ``energy`` is the raw
    (not log) objective.
    """
    x = np.array(x0, dtype=float)
    x /= np.linalg.norm(x, axis=1)[:, None]
    f, g, e = _objective(x, p, eps, zero_cut, cap, log_objective)
    if _bad(f):
        return x, e, 0, NON_FINITE
    step = step_init
    status = MAX_ITERS
    it = 0
    while it < max_iters:
        r = g - np.sum(g * x, axis=1)[:, None] * x
        gn2 = float(np.sum(r * r))
        if np.sqrt(gn2) <= grad_tol:
            status = CONVERGED
            break
        a = step
        accepted = False
        while a > 1e-20:
            y = x - a * r
            y /= np.linalg.norm(y, axis=1)[:, None]
            fy, ey = _value(y, p, eps, log_objective)
            if _bad(fy):
                return x, e, it, NON_FINITE
            if fy < f and fy <= f - c * a * gn2:
                accepted = True
                break
            a *= beta
        if not accepted:
            status = LINE_SEARCH_FAILED
            break
        x = y
        f, g, e = _objective(x, p, eps, zero_cut, cap, log_objective)
        step = min(a / beta, MAX_STEP)
        it += 1
    return x, e, it, status

"""Closed-form lower bounds and reference values."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

WELCH = "welch"
SPHERICAL_DESIGN = "spherical_design"
LIFTED_ETF_VALUE = "lifted_etf_value"
LP_CERTIFICATE = "lp_certificate"


@dataclass(frozen=True)
class BoundReport:
    value: float
    kind: str
    applicability: str

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("bound value must be finite")

    def to_dict(self):
        return asdict(self)


def welch_bound(n: int, d: int) -> BoundReport:
    """Lower bound on the coherence of ``n`` unit vectors in ``R^d``."""
    if n <= d:
        return BoundReport(0.0, WELCH, "N <= d: attained by orthonormal vectors")
    value = math.sqrt((n - d) / (d * (n - 1)))
    return BoundReport(value, WELCH, "equality iff ETF, only possible if N <= d(d+1)/2")


def _is_even_int(p) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


def design_moment(d: int, p: int) -> float:
    """``1*3*...*(p-1) / (d (d+2) ... (d+p-2))`` as a running product."""
    ratio = 1.0
    for j in range(p // 2):
        ratio *= (2 * j + 1) / (d + 2 * j)
    return ratio


def design_bound(n: int, d: int, p) -> BoundReport:
    """Lower bound on FP_p for even ``p >= 2``."""
    if not _is_even_int(p) or p < 2:
        raise ValueError(f"design bound needs an even integer p >= 2, got {p}")
    value = n * n * design_moment(d, int(p)) - n
    return BoundReport(value, SPHERICAL_DESIGN, "equality iff X together with -X is a spherical p-design")


def lifted_etf_value(k: int, p: float) -> float:
    """FP_p of the lifted simplex: ``(k+1) k (1/k)^p``, independent of ``d``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (p > 0):
        raise ValueError("p must be positive")
    return (k + 1) * k * (1.0 / k) ** p


def switching_point(k: int) -> float:
    """Exponent where the lifted simplices of sizes ``k`` and ``k+1`` tie; ``0`` for ``k = 0``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return 0.0
    return (math.log(k + 2) - math.log(k)) / (math.log(k + 1) - math.log(k))


def fekete_ratio(values):
    """``F_N / (N (N-1))`` for a list of ``(N, F_N)`` pairs sorted by ``N``."""
    ns = [n for n, _ in values]
    if ns != sorted(ns):
        raise ValueError("values must be sorted by N")
    return [f / (n * (n - 1)) for n, f in values]


def tau_reference(d: int, p: float):
    """Known limits of ``F_{p,N,d} / N^2`` as ``N -> inf``, else ``None``."""
    if 0 < p <= 2:
        return 1.0 / d
    if d == 2 and _is_even_int(p):
        ratio = 1.0
        for j in range(int(p) // 2):
            ratio *= (2 * j + 1) / (2 * j + 2)
        return ratio
    return None


def all_bounds(n: int, d: int, p) -> dict:
    """Every bound that applies to ``(n, d, p)``, as a JSON-friendly record."""
    out = {"n": n, "d": d, "p": "inf" if math.isinf(p) else p, "bounds": []}
    w = welch_bound(n, d)
    out["bounds"].append(w.to_dict())
    if math.isinf(p):
        out["lower_bound"] = w.value
    else:
        # FP_p^(1/p) >= coherence >= Welch
        lower = w.value**p
        out["bounds"].append(
            BoundReport(lower, WELCH, "Welch bound raised to p: FP_p >= welch^p").to_dict()
        )
        if _is_even_int(p) and p >= 2:
            b = design_bound(n, d, p)
            out["bounds"].append(b.to_dict())
            lower = max(lower, b.value)
        out["lower_bound"] = lower
        if n == d + 1:
            refs = {k: lifted_etf_value(k, p) for k in range(1, d + 1)}
            best = min(refs, key=refs.get)
            out["bounds"].append(
                BoundReport(refs[best], LIFTED_ETF_VALUE, f"upper reference: lifted simplex k={best} (conjectured optimal)").to_dict()
            )
        tau = tau_reference(d, p)
        out["tau"] = tau
    return out

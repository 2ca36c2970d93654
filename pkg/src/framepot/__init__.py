"""Optimal configurations for p-frame potentials of unit vectors in R^d."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    design_bound,
    fekete_ratio,
    lifted_etf_value,
    switching_point,
    tau_reference,
    welch_bound,
)
from .certify import Certificate, NodeSet, certify_half_circle, gegenbauer_expand, hermite_interpolant, hermite_quotient, lp_certify
from .constructions import half_circle, lifted_etf, onb_copies, onb_plus, random_uniform, simplex, symmetrize
from .core import (
    Configuration,
    ConfigurationError,
    canonical_invariant,
    frame_operator,
    gram,
    is_frame,
    lift_projective,
    projective_circle,
)
from .designs import design_check, sharp_check, sphere_moment
from .kernels import BACKEND
from .optimizer import (
    OptimizationResult,
    OptimizerSettings,
    conjecture_test,
    fp_gradient,
    minimize,
    minimize_coherence,
    sweep,
)
from .potentials import coherence, fp_eval, kernel_energy, pfp_discrete

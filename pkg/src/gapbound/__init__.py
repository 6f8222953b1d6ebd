"""First-eigenvalue lower bounds on Riemannian, Kähler and quaternion-Kähler manifolds."""

from .comparison import big_g, cfun, index_energy, jfun, sfun
from .geometry import (
    DriftSpec,
    Kahler,
    QuaternionKahler,
    Riemannian,
    classical_envelope,
    clip_diameter,
    drift_spec,
    drift_value,
    max_diameter,
)
from .solver import (
    BoundResult,
    RadialOperator,
    TrialFunction,
    apply,
    make_operator,
    optimal_bound,
    trial_bound,
    zhong_yang,
)

__all__ = [
    "BoundResult", "DriftSpec", "Kahler", "QuaternionKahler", "RadialOperator",
    "Riemannian", "TrialFunction", "apply", "big_g", "cfun", "classical_envelope",
    "clip_diameter", "drift_spec", "drift_value", "index_energy", "jfun",
    "make_operator", "max_diameter", "optimal_bound", "sfun", "trial_bound", "zhong_yang",
]

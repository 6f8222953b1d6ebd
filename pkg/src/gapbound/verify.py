"""Identity and exactness suite behind ``gapbound verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .comparison import big_g, index_energy, pole_radius
from .geometry import Kahler, QuaternionKahler, Riemannian
from .solver import TrialFunction, make_operator, optimal_bound, trial_bound

IDENTITY_CURVATURES = (-2.0, -1.0, -1e-6, 0.0, 1e-6, 1.0, 2.0)


@dataclass
class Row:
    name: str
    passed: bool
    detail: str


def sample_radii(k: float, count: int = 20, limit: float = 5.0) -> np.ndarray:
    """``count`` radii in the admissible range of ``big_g(k, .)``, away from the pole."""
    top = min(limit, 0.9 * pole_radius(k))
    return np.linspace(top / count, top, count)


def energy_identity_error(curvatures=IDENTITY_CURVATURES, count: int = 20) -> float:
    worst = 0.0
    for k in curvatures:
        for r in sample_radii(k, count):
            worst = max(worst, abs(index_energy(k, r) - big_g(k, r)))
    return worst


def scaling_identity_error(curvatures=IDENTITY_CURVATURES, count: int = 20) -> float:
    worst = 0.0
    for k in curvatures:
        # G(4k, r) needs r < pi / (2 sqrt k)
        r = sample_radii(4.0 * k, count)
        worst = max(worst, float(np.max(np.abs(big_g(4.0 * k, r) - 2.0 * big_g(k, 2.0 * r)))))
    return worst


def random_refined_class(rng: np.random.Generator):
    m = int(rng.integers(1, 9))
    k1, k2 = rng.uniform(-2.0, 2.0, size=2)
    kind = Kahler if rng.random() < 0.5 else QuaternionKahler
    return kind(m, float(k1), float(k2))


def envelope_drift_gap(cls, r) -> float:
    """``drift(envelope) - drift(refined)`` at ``r``; non-negative by concavity."""
    env = geometry.classical_envelope(cls)
    return geometry.index_upper_bound(env, r) - geometry.index_upper_bound(cls, r)


def envelope_domination_worst(samples: int = 1000, seed: int = 12345) -> float:
    """Most negative envelope gap over random (class, r) tuples."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        cls = random_refined_class(rng)
        top = min(geometry.max_diameter(cls), 10.0)
        r = float(rng.uniform(0.0, top) * (1.0 - 1e-9)) or top / 2
        worst = min(worst, envelope_drift_gap(cls, r))
    return worst


def exactness_cases():
    """(label, operator, trial, exact delta) for the closed-form families."""
    cases = [("zhong-yang D=1", make_operator(Riemannian(3, 0.0), 1.0),
              TrialFunction.sine_halfpi(1.0), math.pi**2)]
    D_sphere = math.pi * (1 - 1e-6)
    for n in range(2, 9):
        cases.append((f"sphere n={n}", make_operator(Riemannian(n, 1.0), D_sphere),
                      TrialFunction.sine(0.5), float(n)))
    D_proj = math.pi / 2 * (1 - 1e-6)
    cases.append(("CP^1", make_operator(Kahler(1, 1.0, 0.0), D_proj), TrialFunction.sine(1.0), 8.0))
    cases.append(("HP^1", make_operator(QuaternionKahler(1, 1.0, 0.0), D_proj),
                  TrialFunction.sine(1.0), 16.0))
    return cases


def run_suite(grid_n: int = 2048) -> list[Row]:
    rows = []
    err = energy_identity_error()
    rows.append(Row("energy identity", err <= 1e-8, f"max |energy - G| = {err:.3g} (tol 1e-8)"))
    err = scaling_identity_error()
    rows.append(Row("scaling identity", err <= 1e-12, f"max |G(4k,r) - 2G(k,2r)| = {err:.3g} (tol 1e-12)"))
    worst = envelope_domination_worst()
    rows.append(Row("envelope domination", worst >= -1e-12, f"min gap = {worst:.3g} (tol -1e-12)"))
    for label, op, g, exact in exactness_cases():
        t = trial_bound(op, g, 1024).delta
        o = optimal_bound(op, grid_n).delta
        ok = abs(t - exact) <= 1e-6 * max(1.0, exact) and abs(o - exact) <= 1e-2 * exact
        rows.append(Row(f"exact {label}", ok, f"trial {t:.10g}, optimal {o:.10g}, exact {exact:.10g}"))
    return rows

"""Kähler and quaternion-Kähler model spaces with reference spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import geometry
from .errors import ConfigError, ConsistencyFailure
from .geometry import CurvatureClass, Kahler, QuaternionKahler
from .solver import make_operator, optimal_bound

SPHERE_PROVENANCE = "derived: round sphere of radius 1/2, lambda1 = n / a^2"
EXTERNAL_PROVENANCE = "external spectrum, verify via m=1 oracle and literature"


@dataclass(frozen=True)
class ModelSpace:
    name: str
    cls: CurvatureClass
    diameter: float
    lambda1: Optional[float]
    provenance: str

    @property
    def compact(self) -> bool:
        return math.isfinite(self.diameter)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "class": geometry.class_to_dict(self.cls),
            "diameter": self.diameter if self.compact else "inf",
            "lambda1": self.lambda1,
            "provenance": self.provenance,
        }


def builtin_models(max_m: int = 3) -> list[ModelSpace]:
    """Flat, projective and hyperbolic models for ``m = 1..max_m``.

    Curvatures are normalised so that ``H = 4 k1`` (``Q = 12 k1``) and
    ``Ric_perp = (2m-2) k2`` (``(4m-4) k2``), giving ``k1, k2 in {-1, 0, 1}``.
    """
    models = []
    half_pi = math.pi / 2
    for m in range(1, max_m + 1):
        if m == 1:
            cp_l1, cp_src = 8.0, SPHERE_PROVENANCE
            hp_l1, hp_src = 16.0, SPHERE_PROVENANCE
        else:
            cp_l1, cp_src = 4.0 * (m + 1), EXTERNAL_PROVENANCE
            hp_l1, hp_src = 8.0 * (m + 1), EXTERNAL_PROVENANCE
        models += [
            ModelSpace(f"C^{m}", Kahler(m, 0.0, 0.0), math.inf, None, "flat: H = 0, Ric_perp = 0"),
            ModelSpace(f"CP^{m}", Kahler(m, 1.0, 1.0), half_pi, cp_l1, cp_src),
            ModelSpace(f"CH^{m}", Kahler(m, -1.0, -1.0), math.inf, None, "hyperbolic: H = -4, Ric_perp = -(2m-2)"),
            ModelSpace(f"H^{m}", QuaternionKahler(m, 0.0, 0.0), math.inf, None, "flat: Q = 0, Ric_perp = 0"),
            ModelSpace(f"HP^{m}", QuaternionKahler(m, 1.0, 1.0), half_pi, hp_l1, hp_src),
            ModelSpace(f"HH^{m}", QuaternionKahler(m, -1.0, -1.0), math.inf, None, "hyperbolic: Q = -12, Ric_perp = -(4m-4)"),
        ]
    return models


def find_model(name: str, max_m: int = 8) -> ModelSpace:
    for model in builtin_models(max_m):
        if model.name.lower() == name.lower():
            return model
    raise ConfigError(f"no model named {name!r}")


def consistency_check(model: ModelSpace, grid_n: int = 2048) -> dict:
    """Bound the model's spectrum from below and compare with its known ``lambda1``.

    Requires ``classical envelope bound - 1e-6 <= delta <= lambda1 (1 + 1e-3)``;
    raises ``ConsistencyFailure`` otherwise.
    """
    if not model.compact or model.lambda1 is None:
        raise ConfigError(f"{model.name} is not a compact model with a reference lambda1")
    D = geometry.clip_diameter(model.diameter)
    refined = optimal_bound(make_operator(model.cls, D), grid_n)
    envelope_cls = geometry.classical_envelope(model.cls)
    envelope = optimal_bound(make_operator(envelope_cls, D), grid_n)
    report = {
        "model": model.name,
        "diameter": D,
        "delta": refined.delta,
        "rich_error": refined.rich_error,
        "monotone": refined.monotone,
        "lambda1": model.lambda1,
        "envelope_class": geometry.class_to_dict(envelope_cls),
        "envelope_delta": envelope.delta,
        "improvement": refined.delta - envelope.delta,
    }
    if refined.delta > model.lambda1 * (1.0 + 1e-3):
        raise ConsistencyFailure(
            f"{model.name}: delta <= lambda1 violated ({refined.delta!r} > {model.lambda1!r})"
        )
    if refined.delta < envelope.delta - 1e-6:
        raise ConsistencyFailure(
            f"{model.name}: delta >= envelope delta violated "
            f"({refined.delta!r} < {envelope.delta!r})"
        )
    return report

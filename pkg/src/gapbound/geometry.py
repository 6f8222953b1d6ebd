"""Curvature classes, radial drifts, diameter admissibility and envelopes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .comparison import big_g
from .errors import AdmissibilityError, InvalidClass

CLIP_FACTOR = 1.0 - 1e-9


@dataclass(frozen=True)
class Riemannian:
    n: int
    k: float

    family = "riemannian"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidClass(f"Riemannian dimension must be an integer >= 2, got {self.n}")
        _finite(self.k, "k")

    @property
    def real_dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class Kahler:
    """Kähler manifold of complex dimension ``m`` with H >= 4 k1, Ric_perp >= (2m-2) k2."""

    m: int
    k1: float
    k2: float = 0.0

    family = "kahler"

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidClass(f"complex dimension must be an integer >= 1, got {self.m}")
        _finite(self.k1, "k1")
        _finite(self.k2, "k2")

    @property
    def real_dim(self) -> int:
        return 2 * self.m


@dataclass(frozen=True)
class QuaternionKahler:
    """Quaternion-Kähler manifold with Q >= 12 k1, Ric_perp >= (4m-4) k2."""

    m: int
    k1: float
    k2: float = 0.0

    family = "quaternion-kahler"

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidClass(f"quaternionic dimension must be an integer >= 1, got {self.m}")
        _finite(self.k1, "k1")
        _finite(self.k2, "k2")

    @property
    def real_dim(self) -> int:
        return 4 * self.m


CurvatureClass = Union[Riemannian, Kahler, QuaternionKahler]


def _finite(x, name):
    if not math.isfinite(float(x)):
        raise InvalidClass(f"{name} must be finite, got {x!r}")


@dataclass(frozen=True)
class DriftTerm:
    weight: float
    curvature: float
    scale: float


@dataclass(frozen=True)
class DriftSpec:
    """Radial drift ``b(r) = sum(weight * G(curvature, scale * r))`` on ``(0, diameter)``."""

    terms: tuple[DriftTerm, ...]
    diameter: float

    def as_tuples(self) -> list[tuple[float, float, float]]:
        return [(t.weight, t.curvature, t.scale) for t in self.terms]


def _terms(cls: CurvatureClass) -> tuple[DriftTerm, ...]:
    if isinstance(cls, Riemannian):
        return (DriftTerm(cls.n - 1, cls.k, 1),)
    if isinstance(cls, Kahler):
        return (DriftTerm(2 * cls.m - 2, cls.k2, 1), DriftTerm(2, cls.k1, 2))
    if isinstance(cls, QuaternionKahler):
        return (DriftTerm(4 * cls.m - 4, cls.k2, 1), DriftTerm(6, cls.k1, 2))
    raise InvalidClass(f"not a curvature class: {cls!r}")


def _constraints(cls: CurvatureClass) -> list[tuple[float, str]]:
    """Positive-curvature diameter constraints as (bound, label) pairs."""
    out = []
    if isinstance(cls, Riemannian):
        if cls.k > 0:
            out.append((math.pi / math.sqrt(cls.k), "π/√k"))
        return out
    for term in _terms(cls):
        if term.weight > 0 and term.curvature > 0:
            if term.scale == 2:
                out.append((math.pi / (2.0 * math.sqrt(term.curvature)), "π/(2√k₁)"))
            else:
                out.append((math.pi / math.sqrt(term.curvature), "π/√k₂"))
    return out


def max_diameter(cls: CurvatureClass) -> float:
    """Largest diameter allowed by the positive curvature bounds (``inf`` if none)."""
    return min((b for b, _ in _constraints(cls)), default=math.inf)


def clip_diameter(D: float) -> float:
    """Shrink ``D`` by a relative 1e-9, for diameters that attain the bound exactly."""
    return float(D) * CLIP_FACTOR


def check_diameter(cls: CurvatureClass, D: float) -> float:
    D = float(D)
    if not (D > 0 and math.isfinite(D)):
        raise AdmissibilityError(f"diameter must be positive and finite, got {D!r}")
    for bound, label in sorted(_constraints(cls)):
        if D >= bound:
            raise AdmissibilityError(
                f"diameter {D!r} violates D < {label} = {bound!r} for {cls!r}"
            )
    return D


def drift_spec(cls: CurvatureClass, D: float) -> DriftSpec:
    D = check_diameter(cls, D)
    return DriftSpec(_terms(cls), D)


def drift_value(spec: DriftSpec, r):
    """Evaluate the drift; also the index-form upper bound at distance ``r``."""
    r_arr = np.asarray(r, dtype=float)
    out = np.zeros_like(r_arr)
    for term in spec.terms:
        if term.weight == 0:
            continue
        out = out + term.weight * big_g(term.curvature, term.scale * r_arr)
    return float(out) if np.ndim(r) == 0 else out


def index_upper_bound(cls: CurvatureClass, r: float) -> float:
    """Upper bound on the summed index form along a geodesic of length ``r``."""
    r = float(r)
    spec = DriftSpec(_terms(cls), math.inf)
    return drift_value(spec, r)


def ricci_lower_bound(cls: CurvatureClass) -> float:
    """Lower bound on Ric implied by the class hypotheses."""
    if isinstance(cls, Riemannian):
        return (cls.n - 1) * cls.k
    if isinstance(cls, Kahler):
        return 4 * cls.k1 + (2 * cls.m - 2) * cls.k2
    return 12 * cls.k1 + (4 * cls.m - 4) * cls.k2


def classical_envelope(cls: CurvatureClass) -> Riemannian:
    """Riemannian class with the same real dimension and the implied Ricci bound.

    Since ``k -> G(k, r)`` is concave, its drift dominates the refined one.
    """
    if isinstance(cls, Riemannian):
        raise InvalidClass("classical_envelope needs a Kähler or quaternion-Kähler class")
    n = cls.real_dim
    return Riemannian(n, ricci_lower_bound(cls) / (n - 1))


def class_to_dict(cls: CurvatureClass) -> dict:
    if isinstance(cls, Riemannian):
        return {"family": cls.family, "n": cls.n, "k": cls.k}
    return {"family": cls.family, "m": cls.m, "k1": cls.k1, "k2": cls.k2}


FAMILY_ALIASES = {
    "riemannian": Riemannian,
    "kahler": Kahler,
    "kähler": Kahler,
    "quaternion-kahler": QuaternionKahler,
    "quaternion_kahler": QuaternionKahler,
    "quaternion": QuaternionKahler,
    "qk": QuaternionKahler,
}


def class_from_dict(d: dict) -> CurvatureClass:
    family = str(d.get("family", "")).lower()
    if family not in FAMILY_ALIASES:
        raise InvalidClass(f"unknown family {d.get('family')!r}")
    kind = FAMILY_ALIASES[family]
    try:
        if kind is Riemannian:
            return Riemannian(int(d["n"]), float(d["k"]))
        return kind(int(d["m"]), float(d["k1"]), float(d.get("k2", 0.0)))
    except KeyError as exc:
        raise InvalidClass(f"missing key {exc.args[0]!r} for family {family}") from None

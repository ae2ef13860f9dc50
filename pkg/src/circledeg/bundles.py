"""Degree-set rules for oriented circle bundles over aspherical bases.

An oriented circle bundle is described by its base and an Euler class in
the base's second integral cohomology group.  The rules implemented here
are closed-form consequences of the bundle structure; none of them touch
geometry at run time.  What the geometry supplies instead is a set of
declared flags on the base manifold.  Flags are modeling assertions given
with the base, never computed:

* ``aspherical``: the base is aspherical.
* ``scf_pi1``: every finite-index subgroup of the fundamental group has
  trivial centralizer (self-centralizing-free); makes every
  fiber-preserving homotopy class count once.
* ``hyperbolic``: closed hyperbolic; implies ``aspherical``, ``scf_pi1``
  and ``d_self_finite`` (positive simplicial volume bounds self-map
  degrees by 1).
* ``d_self_is_01``: the base's self-map degree set is exactly {0, 1};
  implies ``d_self_finite``.
* ``d_self_finite``: the base's self-map degree set is finite.
* fixed classes: labels of cohomology classes that every degree-one self
  map fixes.

Rule identifiers attached to certificates:

* ``fixed-class-scaling``: over a base with {0,1} self-degrees and a
  fixed non-torsion class b, any map between the bundles with Euler
  classes m*b and k*b has degree 0 or k/m (and m must divide k).  The
  mechanism is arithmetic: the induced unimodular action has only +-1 as
  rational eigenvalues, so b is scaled by +-1, and the fixed class pins
  the sign.
* ``surface-euler-scaling``: same conclusion over a 2-dimensional base,
  where the top cohomology action of a degree-d map is multiplication
  by d.
* ``eigenvalue-bound``: with only a finite self-degree set, the weaker
  conclusion that nonzero degrees lie in {+-k/m}; an upper bound, not an
  equality.

The vertical and fiber-preserving sets are computed from solve_scalar on
Euler classes; see the function docstrings.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Union

from .abelian import (
    FgAbelianGroup,
    GroupElement,
    IntegerMatrix,
    ScalarSolutionSet,
    apply_matrix,
    is_torsion,
    lattice_compatible,
    solve_scalar,
)
from .degsets import DegreeSet
from .errors import GroupMismatchError, HypothesisError, InputError

__all__ = [
    "KNOWN_FLAGS",
    "BaseManifold",
    "CircleBundle",
    "SphereProduct",
    "ConnectedSum",
    "Stabilized",
    "SymbolicRepeat",
    "ManifoldExpr",
    "expr_dim",
    "expr_to_json",
    "expr_from_json",
    "render_expr",
    "MapModel",
    "MapCatalogue",
    "FiberPreservingResult",
    "MapContribution",
    "PairResult",
    "vertical_degree_set",
    "torsion_consistency",
    "fiber_preserving_degree_set",
    "promote_to_full_degree_set",
    "same_base_pair_degree_set",
    "degree_bound",
    "finiteness_verdict",
    "builtin_registry",
    "load_registry",
    "registry_from_env",
    "PRESET_ENV_VAR",
]

KNOWN_FLAGS = frozenset(
    {"aspherical", "scf_pi1", "hyperbolic", "d_self_is_01", "d_self_finite"}
)

PRESET_ENV_VAR = "CIRCLEDEG_PRESETS"


# ---------------------------------------------------------------------------
# base manifolds


@dataclass(frozen=True)
class BaseManifold:
    """Closed oriented base manifold with declared properties.

    ``h2`` is the second integral cohomology group (Euler classes live
    here), ``named_classes`` distinguished elements of it, ``fixes`` the
    labels of classes every degree-one self map fixes, and ``volume`` the
    simplicial volume when known.
    """

    name: str
    dim: int
    h2: FgAbelianGroup
    named_classes: tuple[tuple[str, GroupElement], ...] = ()
    flags: frozenset[str] = frozenset()
    fixes: frozenset[str] = frozenset()
    volume: Fraction | None = None

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise InputError("base manifold dimension must be >= 2")
        unknown = set(self.flags) - KNOWN_FLAGS
        if unknown:
            raise InputError(f"unknown flags: {sorted(unknown)}")
        flags = set(self.flags)
        if "hyperbolic" in flags:
            flags |= {"aspherical", "scf_pi1", "d_self_finite"}
        if "d_self_is_01" in flags:
            flags.add("d_self_finite")
        object.__setattr__(self, "flags", frozenset(flags))
        object.__setattr__(self, "fixes", frozenset(self.fixes))
        classes = dict(self.named_classes)
        object.__setattr__(self, "named_classes", tuple(sorted(classes.items())))
        for label, cls in classes.items():
            if cls.group != self.h2:
                raise InputError(f"class {label!r} does not live in the base's group")
        for label in self.fixes:
            if label not in classes:
                raise InputError(f"fixed class {label!r} is not a named class")
            if is_torsion(classes[label])[0]:
                raise InputError(f"fixed class {label!r} must be non-torsion")
        if self.volume is not None:
            vol = Fraction(self.volume)
            if vol < 0:
                raise InputError("simplicial volume must be nonnegative")
            object.__setattr__(self, "volume", vol)

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def cls(self, label: str) -> GroupElement:
        for name, elem in self.named_classes:
            if name == label:
                return elem
        raise InputError(f"base {self.name!r} has no class named {label!r}")

    def class_labels(self) -> list[str]:
        return [name for name, _ in self.named_classes]

    def to_json(self) -> dict:
        out: dict = {
            "name": self.name,
            "dim": self.dim,
            "group": self.h2.to_json(),
            "classes": {name: elem.to_json() for name, elem in self.named_classes},
            "flags": sorted(self.flags),
            "fixes": sorted(self.fixes),
        }
        out["volume"] = None if self.volume is None else str(self.volume)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "BaseManifold":
        try:
            group = FgAbelianGroup.from_json(obj["group"])
            classes = tuple(
                (name, GroupElement.from_json(group, elem))
                for name, elem in sorted(obj.get("classes", {}).items())
            )
            vol = obj.get("volume")
            return cls(
                str(obj["name"]),
                int(obj["dim"]),
                group,
                classes,
                frozenset(obj.get("flags", ())),
                frozenset(obj.get("fixes", ())),
                None if vol is None else Fraction(str(vol)),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed base manifold object: {exc}") from exc


# ---------------------------------------------------------------------------
# manifold expressions


@dataclass(frozen=True)
class CircleBundle:
    base: BaseManifold
    euler: GroupElement

    def __post_init__(self) -> None:
        if self.euler.group != self.base.h2:
            raise InputError("Euler class must live in the base's cohomology group")


@dataclass(frozen=True)
class SphereProduct:
    """S^(dim-1) x S^1 of total dimension ``dim``."""

    dim: int

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise InputError("sphere product dimension must be >= 2")


@dataclass(frozen=True)
class ConnectedSum:
    summands: tuple["ManifoldExpr", ...]

    def __post_init__(self) -> None:
        if not self.summands:
            raise InputError("connected sum needs at least one summand")
        dims = {expr_dim(s) for s in self.summands}
        if len(dims) != 1:
            raise InputError("connected sum summands must share a dimension")


@dataclass(frozen=True)
class Stabilized:
    """The higher-dimensional stand-in for ``inner`` after a dimension
    shift; shifts below 3 are not covered by the stabilization rule."""

    inner: "ManifoldExpr"
    shift: int

    def __post_init__(self) -> None:
        if self.shift < 3:
            raise InputError("stabilization shift must be >= 3")


@dataclass(frozen=True)
class SymbolicRepeat:
    """A symbolic number of connected-sum copies of ``factor``."""

    factor: "ManifoldExpr"
    symbol: str


ManifoldExpr = Union[CircleBundle, SphereProduct, ConnectedSum, Stabilized, SymbolicRepeat]


def expr_dim(expr: ManifoldExpr) -> int:
    if isinstance(expr, CircleBundle):
        return expr.base.dim + 1
    if isinstance(expr, SphereProduct):
        return expr.dim
    if isinstance(expr, ConnectedSum):
        return expr_dim(expr.summands[0])
    if isinstance(expr, Stabilized):
        return expr_dim(expr.inner) + expr.shift
    if isinstance(expr, SymbolicRepeat):
        return expr_dim(expr.factor)
    raise InputError(f"not a manifold expression: {expr!r}")


def expr_to_json(expr: ManifoldExpr) -> dict:
    if isinstance(expr, CircleBundle):
        return {"bundle": {"base": expr.base.name, "euler": expr.euler.to_json()}}
    if isinstance(expr, SphereProduct):
        return {"sphereProduct": expr.dim}
    if isinstance(expr, ConnectedSum):
        return {"sum": [expr_to_json(s) for s in expr.summands]}
    if isinstance(expr, Stabilized):
        return {"stabilized": {"inner": expr_to_json(expr.inner), "shift": expr.shift}}
    if isinstance(expr, SymbolicRepeat):
        return {"repeat": {"factor": expr_to_json(expr.factor), "symbol": expr.symbol}}
    raise InputError(f"not a manifold expression: {expr!r}")


def expr_from_json(obj: dict, registry: Mapping[str, BaseManifold]) -> ManifoldExpr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError("manifold expression must be a one-key object")
    key, val = next(iter(obj.items()))
    if key == "bundle":
        name = val.get("base")
        if name not in registry:
            raise InputError(f"unknown base manifold: {name!r}")
        base = registry[name]
        return CircleBundle(base, GroupElement.from_json(base.h2, val["euler"]))
    if key == "sphereProduct":
        return SphereProduct(int(val))
    if key == "sum":
        return ConnectedSum(tuple(expr_from_json(s, registry) for s in val))
    if key == "stabilized":
        return Stabilized(expr_from_json(val["inner"], registry), int(val["shift"]))
    if key == "repeat":
        return SymbolicRepeat(expr_from_json(val["factor"], registry), str(val["symbol"]))
    raise InputError(f"unknown manifold expression kind: {key!r}")


def _render_element(e: GroupElement) -> str:
    coords = list(e.free) + list(e.torsion)
    return "(" + ", ".join(str(x) for x in coords) + ")"


def render_expr(expr: ManifoldExpr) -> str:
    if isinstance(expr, CircleBundle):
        return f"S1-bundle[e={_render_element(expr.euler)}, base={expr.base.name}]"
    if isinstance(expr, SphereProduct):
        return f"S^{expr.dim - 1}xS^1"
    if isinstance(expr, ConnectedSum):
        return " # ".join(render_expr(s) for s in expr.summands)
    if isinstance(expr, Stabilized):
        return f"stab+{expr.shift}({render_expr(expr.inner)})"
    if isinstance(expr, SymbolicRepeat):
        return f"#^{expr.symbol} ({render_expr(expr.factor)})"
    raise InputError(f"not a manifold expression: {expr!r}")


# ---------------------------------------------------------------------------
# map catalogues


@dataclass(frozen=True)
class MapModel:
    """Homotopy data of one fiber-preserving map: its degree and the
    induced action on the target base's cohomology (column convention,
    landing in the source base's group)."""

    degree: int
    action: IntegerMatrix

    def __post_init__(self) -> None:
        if self.degree == 0:
            raise InputError("map degree must be nonzero")

    def to_json(self) -> dict:
        return {"degree": self.degree, "action": self.action.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "MapModel":
        try:
            return cls(int(obj["degree"]), IntegerMatrix.from_json(obj["action"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed map model: {exc}") from exc


@dataclass(frozen=True)
class MapCatalogue:
    """Collection of base-map models; ``complete`` declares that every
    relevant homotopy class is listed, making derived sets exact."""

    maps: tuple[MapModel, ...]
    complete: bool = False

    def to_json(self) -> dict:
        return {"complete": self.complete, "maps": [m.to_json() for m in self.maps]}

    @classmethod
    def from_json(cls, obj: dict) -> "MapCatalogue":
        try:
            return cls(tuple(MapModel.from_json(m) for m in obj.get("maps", ())),
                       bool(obj.get("complete", False)))
        except TypeError as exc:
            raise InputError(f"malformed map catalogue: {exc}") from exc


# ---------------------------------------------------------------------------
# vertical and fiber-preserving sets


def vertical_degree_set(a: GroupElement, b: GroupElement) -> DegreeSet:
    """Degrees of vertical maps between the bundles with Euler classes
    ``a`` (domain) and ``b`` (target) over one base.

    A vertical map of nonzero degree k exists iff k*a = b, so the set is
    the solution set of that scalar equation without 0:

    * b outside the cyclic subgroup of a: empty;
    * a torsion (solutions form a progression modulo order(a)): that
      progression, 0 excluded, an infinite set;
    * a non-torsion: the single solution {k}, when k is nonzero.

    Whether degree-0 vertical maps exist is not decided here; the
    returned set only reports the nonzero classification.
    """
    if a.group != b.group:
        raise GroupMismatchError("Euler classes live in different groups")
    sols = solve_scalar(a, b)
    if sols.is_empty:
        return DegreeSet.empty()
    if sols.is_singleton:
        return DegreeSet.from_finite([sols.base]) if sols.base != 0 else DegreeSet.empty()
    return DegreeSet.from_parts([], [(sols.base, sols.modulus)], excludes_zero=True)


def torsion_consistency(a: GroupElement, b: GroupElement) -> str:
    """"incompatible" iff exactly one of the Euler classes is torsion.

    A fiber-preserving map of nonzero degree forces the two classes to be
    torsion together or non-torsion together.  The classes may live in
    different groups; only their torsion-ness is compared.
    """
    ta, tb = is_torsion(a)[0], is_torsion(b)[0]
    return "incompatible" if ta != tb else "compatible"


@dataclass(frozen=True)
class MapContribution:
    """Transcript entry: how one catalogued map feeds the degree set.

    Every nonzero degree d it contributes factors as d = k * degree with
    k drawn from ``solutions``, the solution set of k*a = image.
    """

    index: int
    degree: int
    image: GroupElement
    solutions: ScalarSolutionSet
    contribution: DegreeSet

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "degree": self.degree,
            "image": self.image.to_json(),
            "solutions": self.solutions.to_json(),
            "contribution": self.contribution.to_json(),
        }


@dataclass(frozen=True)
class FiberPreservingResult:
    degree_set: DegreeSet
    exact: bool
    contributions: tuple[MapContribution, ...] = ()

    def to_json(self) -> dict:
        return {
            "set": self.degree_set.to_json(),
            "exact": self.exact,
            "contributions": [c.to_json() for c in self.contributions],
        }


def _scale_solutions_without_zero(sols: ScalarSolutionSet, factor: int) -> DegreeSet:
    """{k * factor : k in sols, k != 0} as a degree set (factor != 0)."""
    if sols.is_empty:
        return DegreeSet.empty()
    if sols.is_singleton:
        k = sols.base
        return DegreeSet.from_finite([k * factor]) if k != 0 else DegreeSet.empty()
    step = sols.modulus * abs(factor)
    return DegreeSet.from_parts(
        [], [((sols.base * factor) % step, step)],
        excludes_zero=sols.contains(0),
    )


def fiber_preserving_degree_set(catalogue: MapCatalogue, a: GroupElement,
                                b: GroupElement) -> FiberPreservingResult:
    """{0} plus, for every catalogued base map f, the degrees k*deg(f)
    with k a nonzero solution of k*a = f#(b).

    Exact iff the catalogue declares itself complete.  When exactly one
    of a, b is torsion no nonzero-degree fiber-preserving map exists at
    all and the result short-circuits to {0} for every catalogue.
    """
    if torsion_consistency(a, b) == "incompatible":
        return FiberPreservingResult(DegreeSet.from_finite([0]), catalogue.complete)
    out = DegreeSet.from_finite([0])
    contributions = []
    for i, model in enumerate(catalogue.maps):
        if not lattice_compatible(model.action, b.group, a.group):
            raise InputError(
                f"map {i}: action matrix is not a homomorphism between the groups"
            )
        image = apply_matrix(model.action, b, a.group)
        sols = solve_scalar(a, image)
        piece = _scale_solutions_without_zero(sols, model.degree)
        contributions.append(MapContribution(i, model.degree, image, sols, piece))
        out = out.union(piece)
    return FiberPreservingResult(out, catalogue.complete, tuple(contributions))


def promote_to_full_degree_set(domain_base: BaseManifold, target_base: BaseManifold,
                               dfp: DegreeSet) -> tuple[DegreeSet, bool]:
    """The full degree set equals the fiber-preserving one when both
    bases are aspherical and the target base has self-centralizing-free
    fundamental group: every map is then homotopic to a fiber-preserving
    one.  Returns (dfp, justified)."""
    justified = (
        domain_base.has("aspherical")
        and target_base.has("aspherical")
        and target_base.has("scf_pi1")
    )
    return (dfp, justified)


# ---------------------------------------------------------------------------
# same-base pairs, volume bound, finiteness


@dataclass(frozen=True)
class PairResult:
    degree_set: DegreeSet
    exact: bool
    rule: str

    def to_json(self) -> dict:
        out = self.degree_set.to_json()
        if not self.exact:
            out["upperBound"] = True
        return out


def same_base_pair_degree_set(m: int, k: int, base: BaseManifold,
                              class_label: str = "b") -> PairResult:
    """Degree set of maps between the bundles with Euler classes m*b and
    k*b over one base N.

    Exact form, needing flags aspherical, scf_pi1, d_self_is_01 and the
    class fixed: {0, k/m} when m divides k, else {0}.  With only a finite
    self-degree set the result is the upper bound {0, +-k/m} (or {0}),
    marked exact=False.
    """
    if m == 0 or k == 0:
        raise InputError("Euler multipliers m and k must be nonzero")
    for flag in ("aspherical", "scf_pi1"):
        if not base.has(flag):
            raise HypothesisError(f"base {base.name!r} is missing required flag: {flag}")
    if class_label not in dict(base.named_classes):
        raise HypothesisError(f"base {base.name!r} has no class named {class_label!r}")
    if is_torsion(base.cls(class_label))[0]:
        raise HypothesisError(f"class {class_label!r} must be non-torsion")
    strong = base.has("d_self_is_01") and class_label in base.fixes
    if not strong and not base.has("d_self_finite"):
        raise HypothesisError(
            f"base {base.name!r} is missing required flag: d_self_finite"
        )
    divides = k % m == 0
    if strong:
        rule = "surface-euler-scaling" if base.dim == 2 else "fixed-class-scaling"
        degs = DegreeSet.from_finite([0, k // m] if divides else [0])
        return PairResult(degs, True, rule)
    degs = DegreeSet.from_finite([0, k // m, -(k // m)] if divides else [0])
    return PairResult(degs, False, "eigenvalue-bound")


def degree_bound(vol_domain: Fraction, vol_target: Fraction) -> int:
    """Largest possible |degree| by simplicial-volume comparison:
    floor(vol_domain / vol_target).  The target volume must be a known
    positive rational."""
    vd, vt = Fraction(vol_domain), Fraction(vol_target)
    if vt <= 0:
        raise HypothesisError("target simplicial volume must be positive and known")
    if vd < 0:
        raise InputError("domain simplicial volume must be nonnegative")
    return int(vd / vt)


def finiteness_verdict(domain: ManifoldExpr, target: ManifoldExpr,
                       d_base_finite: bool = False,
                       pullback_class_set_finite: bool = False) -> str:
    """"finite" iff the hypotheses for a finite full degree set hold:
    both bases aspherical, target base scf_pi1, target Euler class
    non-torsion, the base degree set finite, and finitely many candidate
    pullback classes.  A hyperbolic target base supplies the last two
    (and its own asphericity and scf) by itself; otherwise they are
    caller-declared facts."""
    if not isinstance(domain, CircleBundle) or not isinstance(target, CircleBundle):
        raise InputError("finiteness verdict applies to circle bundles")
    hyp = target.base.has("hyperbolic")
    ok = (
        domain.base.has("aspherical")
        and target.base.has("aspherical")
        and target.base.has("scf_pi1")
        and not is_torsion(target.euler)[0]
        and (d_base_finite or hyp)
        and (pullback_class_set_finite or hyp)
    )
    return "finite" if ok else "unknown"


# ---------------------------------------------------------------------------
# preset registry


def _rank1_base(name: str, dim: int, flags: Iterable[str], fixes: Iterable[str],
                volume: Fraction | None = None) -> BaseManifold:
    h2 = FgAbelianGroup(1)
    return BaseManifold(
        name, dim, h2,
        (("b", h2.element([1])),),
        frozenset(flags), frozenset(fixes), volume,
    )


def builtin_registry() -> dict[str, BaseManifold]:
    """Shipped base presets, each with a rank-1 cohomology group and the
    distinguished non-torsion class b = (1).

    * ``surface``: closed hyperbolic surface.  Declares d_self_is_01 and
      the fixed class as modeling axioms so the same-base pair rule runs;
      over a surface the honest mechanism is the Euler-class scaling of
      top cohomology, and pair results are tagged surface-euler-scaling.
    * ``knot-glue-3``: closed 3-manifold glued from the exteriors of two
      distinct hyperbolic knots (one with trivial symmetry group) along
      their boundary tori; aspherical, self-degree set {0, 1}, meridian
      class fixed.
    * ``hyp-odd-4``: closed hyperbolic 4-manifold with positive second
      Betti number and an isometry group of odd order, so degree +-1 self
      maps cannot reverse orientation and the self-degree set is {0, 1}.
    """
    return {
        "surface": _rank1_base(
            "surface", 2, ("hyperbolic", "d_self_is_01"), ("b",)
        ),
        "knot-glue-3": _rank1_base(
            "knot-glue-3", 3, ("aspherical", "scf_pi1", "d_self_is_01"), ("b",)
        ),
        "hyp-odd-4": _rank1_base(
            "hyp-odd-4", 4, ("hyperbolic", "d_self_is_01"), ("b",)
        ),
    }


def load_registry(path: str | Path) -> dict[str, BaseManifold]:
    """Built-ins plus the bases declared in a JSON registry file; file
    entries override built-ins with the same name."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"registry file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("bases"), list):
        raise InputError("registry file must be an object with a 'bases' array")
    registry = builtin_registry()
    for entry in obj["bases"]:
        base = BaseManifold.from_json(entry)
        registry[base.name] = base
    return registry


def registry_from_env() -> dict[str, BaseManifold]:
    path = os.environ.get(PRESET_ENV_VAR)
    if path:
        return load_registry(path)
    return builtin_registry()

"""Degree-set rules for circle bundles: vertical, fiber-preserving, pairs.

An oriented circle bundle is (base, Euler class).  Maps between bundles
over aspherical bases are constrained by exact arithmetic on the Euler
classes; these rules compute the resulting degree sets.
"""

from fractions import Fraction

from circledeg import (
    CircleBundle,
    FgAbelianGroup,
    IntegerMatrix,
    MapCatalogue,
    MapModel,
    builtin_registry,
    degree_bound,
    fiber_preserving_degree_set,
    finiteness_verdict,
    same_base_pair_degree_set,
    vertical_degree_set,
)

# Vertical maps cover the identity of the base: degree k needs k*a = b.
z = FgAbelianGroup(1)
print("vertical, a=2b:", vertical_degree_set(z.element([2]), z.element([6])).render())

z6 = FgAbelianGroup(0, (6,))
dv = vertical_degree_set(z6.element(torsion=[2]), z6.element(torsion=[4]))
print("vertical over torsion classes:", dv.render())
# Whole progression of degrees; whether 0 also occurs is left open, the
# sets above list the nonzero classification only.

# Fiber-preserving maps cover some base map f; each catalogued f with
# degree d and cohomology action A contributes k*d whenever k*a = A(b).
cat = MapCatalogue(
    (MapModel(3, IntegerMatrix.from_rows([[4]])),),
    complete=True,
)
res = fiber_preserving_degree_set(cat, z.element([2]), z.element([1]))
print("fiber-preserving set:", res.degree_set.render(), "exact:", res.exact)
for c in res.contributions:
    print(f"  base map {c.index}: degree {c.degree}, k in "
          f"{c.solutions.window(-5, 5)}, contributes {c.contribution.render()}")

# Same base, Euler classes m*b and k*b.  Over a base whose self maps
# have degree set {0, 1} and fix b, the answer is exact.
base = builtin_registry()["knot-glue-3"]
print("pair m=2,k=6:", same_base_pair_degree_set(2, 6, base).degree_set.render())
print("pair m=2,k=3:", same_base_pair_degree_set(2, 3, base).degree_set.render())

# A positive simplicial volume downstairs caps the degree upstairs.
print("volume bound 7/2 over 1/3:", degree_bound(Fraction(7, 2), Fraction(1, 3)))

# Finiteness of the full degree set needs the strong hypotheses; a
# hyperbolic target base supplies most of them by itself.
reg = builtin_registry()
dom = CircleBundle(reg["knot-glue-3"], reg["knot-glue-3"].cls("b"))
tgt = CircleBundle(reg["hyp-odd-4"], 2 * reg["hyp-odd-4"].cls("b"))
print("finiteness:", finiteness_verdict(dom, tgt))

"""Exact arithmetic in finitely generated abelian groups.

Everything here runs on arbitrary-precision Python integers; there is no
floating point and no fixed-width arithmetic anywhere.  The group model is
the invariant-factor form

    Z^rank  (+)  Z/d_1 (+) ... (+) Z/d_t      with d_1 | d_2 | ... | d_t,

all d_j >= 2.  Elements carry integer coordinates on the free part and
residues 0 <= r_j < d_j on the torsion part.

JSON formats (stable, used by the CLI and the certificate files):

* group:    ``{"rank": r, "torsion": [d_1, ..., d_t]}``
* element:  ``{"free": [...], "torsion": [...]}``
* matrix:   ``{"rows": r, "cols": c, "entries": [...]}`` row-major
* solution set: ``{"kind": "empty"}`` or
  ``{"kind": "progression", "base": b, "mod": m}`` where ``mod`` 0 means
  the singleton {b} and ``mod`` m > 0 means {b + q*m : q in Z} with
  0 <= b < m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

from .errors import GroupMismatchError, InputError

__all__ = [
    "FgAbelianGroup",
    "GroupElement",
    "IntegerMatrix",
    "ScalarSolutionSet",
    "smith_normal_form",
    "canonicalize_group",
    "is_torsion",
    "solve_scalar",
    "in_cyclic_subgroup",
    "lattice_compatible",
    "validate_endomorphism",
    "apply_matrix",
    "unimodular_rational_eigen_check",
]


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix, row-major.

    >>> IntegerMatrix.from_rows([[1, 2], [3, 4]]).det()
    -2
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise InputError("entry rows do not match declared row count")
        for row in self.entries:
            if len(row) != self.cols:
                raise InputError("entry row length does not match column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        tup = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(tup[0]) if tup else 0
        return cls(len(tup), cols, tup)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise InputError("matrix shapes do not compose")
        rows = []
        for i in range(self.rows):
            a_row = self.entries[i]
            rows.append(tuple(
                sum(a_row[k] * other.entries[k][j] for k in range(self.cols))
                for j in range(other.cols)
            ))
        return IntegerMatrix(self.rows, other.cols, tuple(rows))

    __matmul__ = mul

    def apply(self, vector: Sequence[int]) -> list[int]:
        if len(vector) != self.cols:
            raise InputError("vector length does not match column count")
        return [sum(row[j] * vector[j] for j in range(self.cols)) for row in self.entries]

    def det(self) -> int:
        """Exact determinant by the Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise InputError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if pivot_row is None:
                    return 0
                a[k], a[pivot_row] = a[pivot_row], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    # Bareiss: the division is exact.
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def to_json(self) -> dict:
        flat = [x for row in self.entries for x in row]
        return {"rows": self.rows, "cols": self.cols, "entries": flat}

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerMatrix":
        try:
            rows, cols, flat = int(obj["rows"]), int(obj["cols"]), obj["entries"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed matrix object: {exc}") from exc
        if len(flat) != rows * cols:
            raise InputError("matrix entries length is not rows*cols")
        ent = tuple(tuple(int(flat[i * cols + j]) for j in range(cols)) for i in range(rows))
        return cls(rows, cols, ent)


# ---------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class FgAbelianGroup:
    """Finitely generated abelian group in invariant-factor form.

    ``torsion`` must be a divisibility chain of integers >= 2.  Use
    :func:`canonicalize_group` to reach this form from an arbitrary
    relation matrix.

    >>> FgAbelianGroup(1, (2, 4)).generator_count
    3
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise InputError("rank must be nonnegative")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for d in self.torsion:
            if d < 2:
                raise InputError("torsion invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise InputError("torsion factors must form a divisibility chain")

    @property
    def generator_count(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank, (0,) * len(self.torsion))

    def element(self, free: Iterable[int] = (), torsion: Iterable[int] = ()) -> "GroupElement":
        return GroupElement(self, tuple(free), tuple(torsion))

    def elements(self) -> Iterator["GroupElement"]:
        """Iterate the whole group; only valid for finite groups."""
        if not self.is_finite:
            raise InputError("cannot enumerate an infinite group")
        def rec(j: int, acc: list[int]) -> Iterator[GroupElement]:
            if j == len(self.torsion):
                yield GroupElement(self, (), tuple(acc))
                return
            for r in range(self.torsion[j]):
                yield from rec(j + 1, acc + [r])
        return rec(0, [])

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "FgAbelianGroup":
        try:
            return cls(int(obj["rank"]), tuple(int(d) for d in obj.get("torsion", ())))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed group object: {exc}") from exc


@dataclass(frozen=True)
class GroupElement:
    """Element of an :class:`FgAbelianGroup`; torsion residues stay reduced.

    >>> g = FgAbelianGroup(1, (6,))
    >>> g.element([2], [10]).torsion
    (4,)
    """

    group: FgAbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self) -> None:
        free = tuple(int(x) for x in self.free)
        tors = tuple(int(x) for x in self.torsion)
        if len(free) != self.group.rank:
            raise InputError("free coordinate count does not match group rank")
        if len(tors) != len(self.group.torsion):
            raise InputError("torsion coordinate count does not match group")
        tors = tuple(r % d for r, d in zip(tors, self.group.torsion))
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "torsion", tors)

    def _check_same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise GroupMismatchError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check_same_group(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = scale

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.free) and all(r == 0 for r in self.torsion)

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, group: FgAbelianGroup, obj: dict) -> "GroupElement":
        try:
            return cls(group, tuple(int(x) for x in obj.get("free", ())),
                       tuple(int(x) for x in obj.get("torsion", ())))
        except TypeError as exc:
            raise InputError(f"malformed element object: {exc}") from exc


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return unimodular (U, D, V) with U * m * V = D in Smith normal form.

    D is diagonal with nonnegative entries forming a divisibility chain.
    Pivot choice is the smallest nonzero absolute value in the remaining
    block, ties broken by lowest (row, col), so identical inputs always
    produce identical output.

    >>> d = smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 3]]))[1]
    >>> [d[i, i] for i in range(2)]
    [1, 6]
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def row_sub(i: int, j: int, q: int) -> None:
        # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(i: int, j: int, q: int) -> None:
        # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def row_add(i: int, j: int) -> None:
        a[i] = [x + y for x, y in zip(a[i], a[j])]
        u[i] = [x + y for x, y in zip(u[i], u[j])]

    for t in range(min(r, c)):
        # pivot: smallest |value| != 0 in the lower-right block, lowest (row, col) on ties
        best: tuple[int, int] | None = None
        for i in range(t, r):
            for j in range(t, c):
                val = a[i][j]
                if val != 0 and (best is None or abs(val) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])

        while True:
            if a[t][t] < 0:
                negate_row(t)
            pivot = a[t][t]
            # clear the column under the pivot
            restart = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // pivot
                    row_sub(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            # clear the row right of the pivot
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // pivot
                    col_sub(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # divisibility sweep: the pivot must divide the whole block
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % pivot != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender)

    return (
        IntegerMatrix.from_rows(u, r),
        IntegerMatrix.from_rows(a, c),
        IntegerMatrix.from_rows(v, c),
    )


def canonicalize_group(relations: IntegerMatrix) -> FgAbelianGroup:
    """Group presented as Z^cols modulo the row space of ``relations``.

    >>> canonicalize_group(IntegerMatrix.from_rows([[2, 0], [0, 3]]))
    FgAbelianGroup(rank=0, torsion=(6,))
    >>> canonicalize_group(IntegerMatrix(1, 2, ((2, 0),)))
    FgAbelianGroup(rank=1, torsion=(2,))
    """
    _, d, _ = smith_normal_form(relations)
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    nonzero = [x for x in diag if x != 0]
    torsion = tuple(x for x in nonzero if x >= 2)
    return FgAbelianGroup(relations.cols - len(nonzero), torsion)


# ---------------------------------------------------------------------------
# torsion and scalar equations


def is_torsion(a: GroupElement) -> tuple[bool, int | None]:
    """Whether ``a`` has finite order, and the order when it does.

    The order of a residue r modulo d is d / gcd(d, r); the order of ``a``
    is the lcm over its torsion coordinates.

    >>> is_torsion(FgAbelianGroup(0, (6,)).element(torsion=[2]))
    (True, 3)
    """
    if any(x != 0 for x in a.free):
        return (False, None)
    order = 1
    for r, d in zip(a.torsion, a.group.torsion):
        order = lcm(order, d // gcd(d, r))
    return (True, order)


@dataclass(frozen=True)
class ScalarSolutionSet:
    """Solutions k of a scalar equation, empty or an arithmetic progression.

    ``modulus`` 0 encodes the singleton {base}; ``modulus`` m > 0 encodes
    {base + q*m : q in Z} with 0 <= base < m.
    """

    kind: str  # "empty" | "progression"
    base: int = 0
    modulus: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("empty", "progression"):
            raise InputError("solution set kind must be 'empty' or 'progression'")
        if self.kind == "progression":
            if self.modulus < 0:
                raise InputError("modulus must be nonnegative")
            if self.modulus > 0 and not (0 <= self.base < self.modulus):
                object.__setattr__(self, "base", self.base % self.modulus)

    @classmethod
    def empty(cls) -> "ScalarSolutionSet":
        return cls("empty")

    @classmethod
    def singleton(cls, k: int) -> "ScalarSolutionSet":
        return cls("progression", k, 0)

    @classmethod
    def progression(cls, base: int, modulus: int) -> "ScalarSolutionSet":
        if modulus <= 0:
            raise InputError("progression modulus must be positive")
        return cls("progression", base % modulus, modulus)

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def is_singleton(self) -> bool:
        return self.kind == "progression" and self.modulus == 0

    def contains(self, k: int) -> bool:
        if self.is_empty:
            return False
        if self.modulus == 0:
            return k == self.base
        return (k - self.base) % self.modulus == 0

    __contains__ = contains

    def window(self, lo: int, hi: int) -> list[int]:
        """All members k with lo <= k <= hi, ascending."""
        if self.is_empty:
            return []
        if self.modulus == 0:
            return [self.base] if lo <= self.base <= hi else []
        first = lo + (self.base - lo) % self.modulus
        return list(range(first, hi + 1, self.modulus))

    def meet(self, other: "ScalarSolutionSet") -> "ScalarSolutionSet":
        """Exact intersection (Chinese remainder on progressions)."""
        if self.is_empty or other.is_empty:
            return ScalarSolutionSet.empty()
        if self.modulus == 0:
            return self if other.contains(self.base) else ScalarSolutionSet.empty()
        if other.modulus == 0:
            return other if self.contains(other.base) else ScalarSolutionSet.empty()
        combined = _crt(self.base, self.modulus, other.base, other.modulus)
        if combined is None:
            return ScalarSolutionSet.empty()
        return ScalarSolutionSet.progression(*combined)

    def to_json(self) -> dict:
        if self.is_empty:
            return {"kind": "empty"}
        return {"kind": "progression", "base": self.base, "mod": self.modulus}

    @classmethod
    def from_json(cls, obj: dict) -> "ScalarSolutionSet":
        kind = obj.get("kind")
        if kind == "empty":
            return cls.empty()
        if kind == "progression":
            return cls("progression", int(obj["base"]), int(obj["mod"]))
        raise InputError(f"unknown solution set kind: {kind!r}")


def _crt(b1: int, m1: int, b2: int, m2: int) -> tuple[int, int] | None:
    """Intersect b1 mod m1 with b2 mod m2; None when incompatible."""
    g = gcd(m1, m2)
    if (b1 - b2) % g != 0:
        return None
    l = lcm(m1, m2)
    t = ((b2 - b1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return ((b1 + m1 * t) % l, l)


def _linear_congruence(a: int, c: int, d: int) -> ScalarSolutionSet:
    """Solve k*a == c (mod d) for d >= 1."""
    if d == 1:
        return ScalarSolutionSet.progression(0, 1)
    g = gcd(a, d)
    if c % g != 0:
        return ScalarSolutionSet.empty()
    a1, c1, d1 = a // g, c // g, d // g
    if d1 == 1:
        return ScalarSolutionSet.progression(0, 1)
    k0 = (c1 * pow(a1, -1, d1)) % d1
    return ScalarSolutionSet.progression(k0, d1)


def solve_scalar(a: GroupElement, c: GroupElement) -> ScalarSolutionSet:
    """All integers k with k*a = c, as an exact solution set.

    Free coordinates force exact divisions; torsion coordinates are linear
    congruences, combined by the Chinese remainder theorem.  When ``a`` is
    torsion and the result is nonempty its modulus equals the order of
    ``a``.

    >>> z = FgAbelianGroup(1)
    >>> solve_scalar(z.element([2]), z.element([6]))
    ScalarSolutionSet(kind='progression', base=3, modulus=0)
    >>> solve_scalar(z.element([2]), z.element([3])).is_empty
    True
    """
    if a.group != c.group:
        raise GroupMismatchError("solve_scalar needs both elements in one group")
    out = ScalarSolutionSet.progression(0, 1)  # all integers
    for av, cv in zip(a.free, c.free):
        if av == 0:
            if cv != 0:
                return ScalarSolutionSet.empty()
            continue
        if cv % av != 0:
            return ScalarSolutionSet.empty()
        out = out.meet(ScalarSolutionSet.singleton(cv // av))
        if out.is_empty:
            return out
    for av, cv, d in zip(a.torsion, c.torsion, a.group.torsion):
        out = out.meet(_linear_congruence(av, cv, d))
        if out.is_empty:
            return out
    return out


def in_cyclic_subgroup(b: GroupElement, a: GroupElement) -> bool:
    """True iff b lies in the subgroup generated by a (k = 0 included)."""
    return not solve_scalar(a, b).is_empty


# ---------------------------------------------------------------------------
# homomorphisms given by integer matrices


def lattice_compatible(m: IntegerMatrix, domain: FgAbelianGroup, codomain: FgAbelianGroup) -> bool:
    """Whether ``m`` defines a homomorphism ``domain -> codomain``.

    Column convention: column j is the image of the j-th canonical
    generator (free generators first, then torsion).  The matrix is a
    homomorphism iff it maps each relation d_j * gen_j into the codomain's
    relation lattice: torsion generators must land on free coordinates
    with value 0 and on torsion coordinates with d_j * entry == 0 mod d'_i.
    """
    if m.rows != codomain.generator_count or m.cols != domain.generator_count:
        return False
    for jt, dj in enumerate(domain.torsion):
        j = domain.rank + jt
        for i in range(codomain.rank):
            if m[i, j] != 0:
                return False
        for it, di in enumerate(codomain.torsion):
            if (dj * m[codomain.rank + it, j]) % di != 0:
                return False
    return True


def validate_endomorphism(g: FgAbelianGroup, m: IntegerMatrix) -> bool:
    """Whether ``m`` is a well-defined endomorphism of ``g``.

    >>> g = FgAbelianGroup(0, (2, 4))
    >>> validate_endomorphism(g, IntegerMatrix.from_rows([[0, 1], [1, 0]]))
    False
    """
    return lattice_compatible(m, g, g)


def apply_matrix(m: IntegerMatrix, a: GroupElement, codomain: FgAbelianGroup) -> GroupElement:
    """Image of ``a`` under the homomorphism ``m`` (column convention)."""
    coords = m.apply(list(a.free) + list(a.torsion))
    return GroupElement(codomain, tuple(coords[: codomain.rank]), tuple(coords[codomain.rank:]))


# ---------------------------------------------------------------------------
# unimodularity and rational eigenvalues


def _char_poly(m: IntegerMatrix) -> list[int]:
    """Coefficients of det(xI - m), descending powers, leading 1.

    Faddeev-LeVerrier recursion; every division is exact over Z.
    """
    n = m.rows
    coeffs = [1]
    prod = IntegerMatrix.from_rows([[0] * n for _ in range(n)], n)  # m * M_{k-1}
    for k in range(1, n + 1):
        mk = IntegerMatrix.from_rows(
            [[prod[i, j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)], n
        )
        prod = m.mul(mk)
        tr = sum(prod[i, i] for i in range(n))
        assert tr % k == 0
        coeffs.append(-(tr // k))
    return coeffs


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: Sequence[int], root: int) -> list[int]:
    """Divide a monic polynomial by (x - root); remainder must be 0."""
    out: list[int] = []
    acc = 0
    for c in coeffs[:-1]:
        acc = acc * root + c
        out.append(acc)
    assert acc * root + coeffs[-1] == 0
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def unimodular_rational_eigen_check(m: IntegerMatrix) -> tuple[bool, list[Fraction]]:
    """(|det| == 1, rational eigenvalues with multiplicity, descending).

    The characteristic polynomial is monic with integer coefficients, so
    by the rational-root test every rational eigenvalue is an integer
    dividing the constant term.

    >>> unimodular_rational_eigen_check(IntegerMatrix.from_rows([[0, 1], [-1, 0]]))
    (True, [])
    >>> unimodular_rational_eigen_check(IntegerMatrix.from_rows([[2, 0], [0, 1]]))
    (False, [Fraction(2, 1), Fraction(1, 1)])
    """
    if m.rows != m.cols:
        raise InputError("eigen check needs a square matrix")
    unimodular = abs(m.det()) == 1
    coeffs = _char_poly(m)
    roots: list[int] = []
    while len(coeffs) > 1 and coeffs[-1] == 0:
        roots.append(0)
        coeffs = coeffs[:-1]
    while len(coeffs) > 1:
        found = None
        for d in _divisors(coeffs[-1]):
            for cand in (d, -d):
                if _poly_eval(coeffs, cand) == 0:
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        coeffs = _poly_deflate(coeffs, found)
    roots.sort(reverse=True)
    return (unimodular, [Fraction(r) for r in roots])

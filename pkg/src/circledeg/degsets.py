"""Degree sets, subsequence sums, and decomposition certificates.

A :class:`DegreeSet` denotes a set of integers as a finite part plus a
union of arithmetic progressions; degree sets of the geometric rules are
always of this shape.  The canonical form keeps the parts disjoint from
each other, so structural equality works for all sets produced by this
package, and :meth:`DegreeSet.equals` decides denotational equality
exactly in all cases.

For a finite integer sequence B (nonzero entries, duplicates allowed and
meaningful), S_B is the set of sums of all subsequences, including 0 as
the sum of the empty subsequence.  ``decompose`` writes a finite target
set containing 0 as an intersection of such S_B, and the certificate it
emits can be re-checked from scratch by ``verify_decomposition``.

JSON formats:

* degree set: ``{"finite": [...]}`` plus ``"progressions":
  [{"base": b, "mod": m}, ...]`` when nonempty and ``"excludesZero": true``
  when the progression part excludes 0.
* sequence: plain integer array.
* decomposition certificate: see :class:`DecompositionCertificate.to_json`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

from .errors import InputError, ResourceCapError

__all__ = [
    "DegreeSet",
    "SequenceB",
    "SearchLimits",
    "DecompositionCertificate",
    "subsequence_sums",
    "decompose",
    "verify_decomposition",
    "SUM_LENGTH_CAP",
    "VERIFY_LENGTH_CAP",
]

SUM_LENGTH_CAP = 40
VERIFY_LENGTH_CAP = 20


def _crt_pair(b1: int, m1: int, b2: int, m2: int) -> tuple[int, int] | None:
    g = gcd(m1, m2)
    if (b1 - b2) % g != 0:
        return None
    l = lcm(m1, m2)
    if m2 // g == 1:
        return (b1 % l, l)
    t = ((b2 - b1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g)
    return ((b1 + m1 * t) % l, l)


@dataclass(frozen=True)
class DegreeSet:
    """Finite integers plus arithmetic progressions, canonicalized.

    ``excludes_zero_in_progressions`` removes 0 from the progression part
    only; a 0 in ``finite`` always counts.  Construction canonicalizes:
    bases reduced, nested progressions dropped, finite members covered by
    a progression dropped, and the excludes-zero flag kept only while it
    matters (some progression passes through 0 and no finite 0 exists).

    >>> DegreeSet.from_finite([3, 0, 3]).finite
    (0, 3)
    >>> 5 in DegreeSet.from_parts([], [(2, 3)])
    True
    """

    finite: tuple[int, ...] = ()
    progressions: tuple[tuple[int, int], ...] = ()
    excludes_zero_in_progressions: bool = False

    def __post_init__(self) -> None:
        progs = []
        for base, mod in self.progressions:
            if mod < 1:
                raise InputError("progression modulus must be >= 1")
            progs.append((base % mod, mod))
        progs = sorted(set(progs), key=lambda p: (p[1], p[0]))
        # drop progressions contained in another one
        kept: list[tuple[int, int]] = []
        for p in progs:
            if not any(q != p and p[1] % q[1] == 0 and (p[0] - q[0]) % q[1] == 0
                       for q in progs):
                kept.append(p)
        # the containment test above treats equal pairs as distinct objects;
        # dedupe handled by set() already, and mutual containment of distinct
        # pairs cannot happen after base reduction.
        flag = self.excludes_zero_in_progressions
        finite = sorted(set(int(x) for x in self.finite))
        if flag and (0 in finite or not any(base == 0 for base, _ in kept)):
            flag = False
        def in_progs(x: int) -> bool:
            return any((x - base) % mod == 0 for base, mod in kept)
        finite = [x for x in finite
                  if not in_progs(x) or (x == 0 and flag)]
        object.__setattr__(self, "finite", tuple(finite))
        object.__setattr__(self, "progressions", tuple(kept))
        object.__setattr__(self, "excludes_zero_in_progressions", flag)

    # -- constructors

    @classmethod
    def empty(cls) -> "DegreeSet":
        return cls()

    @classmethod
    def from_finite(cls, xs: Iterable[int]) -> "DegreeSet":
        return cls(tuple(xs))

    @classmethod
    def from_parts(cls, finite: Iterable[int], progressions: Iterable[tuple[int, int]],
                   excludes_zero: bool = False) -> "DegreeSet":
        return cls(tuple(finite), tuple(progressions), excludes_zero)

    # -- queries

    @property
    def is_empty(self) -> bool:
        return not self.finite and not self.progressions

    @property
    def is_finite_set(self) -> bool:
        return not self.progressions

    def as_finite_set(self) -> frozenset[int]:
        if not self.is_finite_set:
            raise InputError("degree set is infinite")
        return frozenset(self.finite)

    def contains(self, d: int) -> bool:
        if d in self.finite:
            return True
        if d == 0 and self.excludes_zero_in_progressions:
            return False
        return any((d - base) % mod == 0 for base, mod in self.progressions)

    __contains__ = contains

    def window(self, lo: int, hi: int) -> list[int]:
        """Members within [lo, hi], ascending; usable as a test oracle."""
        out = {x for x in self.finite if lo <= x <= hi}
        for base, mod in self.progressions:
            first = lo + (base - lo) % mod
            out.update(range(first, hi + 1, mod))
        if self.excludes_zero_in_progressions and 0 not in self.finite:
            out.discard(0)
        return sorted(out)

    # -- algebra

    def union(self, other: "DegreeSet") -> "DegreeSet":
        finite = set(self.finite) | set(other.finite)
        if self.contains(0) or other.contains(0):
            finite.add(0)
        return DegreeSet(
            tuple(finite),
            self.progressions + other.progressions,
            self.excludes_zero_in_progressions or other.excludes_zero_in_progressions,
        )

    def intersect(self, other: "DegreeSet") -> "DegreeSet":
        finite = {x for x in self.finite if other.contains(x)}
        finite |= {x for x in other.finite if self.contains(x)}
        progs = []
        for b1, m1 in self.progressions:
            for b2, m2 in other.progressions:
                hit = _crt_pair(b1, m1, b2, m2)
                if hit is not None:
                    progs.append(hit)
        return DegreeSet(
            tuple(finite),
            tuple(progs),
            self.excludes_zero_in_progressions or other.excludes_zero_in_progressions,
        )

    __or__ = union
    __and__ = intersect

    def equals(self, other: "DegreeSet") -> bool:
        """Exact denotational equality (structural forms may differ)."""
        mods = [m for _, m in self.progressions] + [m for _, m in other.progressions]
        big = lcm(*mods) if mods else 1
        def covered(s: "DegreeSet") -> frozenset[int]:
            return frozenset(
                r for r in range(big)
                for base, mod in s.progressions
                if (r - base) % mod == 0
            )
        if covered(self) != covered(other):
            return False
        probes = set(self.finite) | set(other.finite) | {0}
        return all(self.contains(p) == other.contains(p) for p in probes)

    def to_json(self) -> dict:
        out: dict = {"finite": list(self.finite)}
        if self.progressions:
            out["progressions"] = [{"base": b, "mod": m} for b, m in self.progressions]
        if self.excludes_zero_in_progressions:
            out["excludesZero"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DegreeSet":
        try:
            finite = tuple(int(x) for x in obj.get("finite", ()))
            progs = tuple((int(p["base"]), int(p["mod"])) for p in obj.get("progressions", ()))
            return cls(finite, progs, bool(obj.get("excludesZero", False)))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed degree set object: {exc}") from exc

    def render(self) -> str:
        """Compact human-readable form, used by the text output mode."""
        parts = []
        if self.finite:
            parts.append("{" + ", ".join(str(x) for x in self.finite) + "}")
        for base, mod in self.progressions:
            tail = " minus {0}" if self.excludes_zero_in_progressions and base == 0 else ""
            parts.append(f"({base} mod {mod}){tail}")
        return " u ".join(parts) if parts else "{}"


@dataclass(frozen=True)
class SequenceB:
    """Finite sequence of nonzero integers; duplicates are meaningful.

    >>> SequenceB((1, 1, -2)).entries
    (1, 1, -2)
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        ent = tuple(int(x) for x in self.entries)
        if any(x == 0 for x in ent):
            raise InputError("sequence entries must be nonzero")
        object.__setattr__(self, "entries", ent)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def to_json(self) -> list[int]:
        return list(self.entries)

    @classmethod
    def from_json(cls, obj: Sequence[int]) -> "SequenceB":
        return cls(tuple(int(x) for x in obj))


def _sums_of(entries: Sequence[int]) -> frozenset[int]:
    """Sparse DP over the offset range [sum of negatives, sum of positives]."""
    sums = {0}
    for e in entries:
        sums |= {s + e for s in sums}
    return frozenset(sums)


def subsequence_sums(b: SequenceB, max_len: int = SUM_LENGTH_CAP) -> DegreeSet:
    """S_B as a finite degree set; 0 always belongs (empty subsequence).

    >>> sorted(subsequence_sums(SequenceB((1, 2))).finite)
    [0, 1, 2, 3]
    >>> subsequence_sums(SequenceB(())).finite
    (0,)
    """
    if len(b) > max_len:
        raise ResourceCapError(
            "max_len", max_len,
            f"sequence length {len(b)} exceeds the cap of {max_len}",
        )
    return DegreeSet.from_finite(_sums_of(b.entries))


# ---------------------------------------------------------------------------
# decomposition search


@dataclass(frozen=True)
class SearchLimits:
    """Caps for the decomposition search; None means the derived default.

    Defaults: length |a| + 4, entry magnitude 4 * max|a|, and a total
    candidate budget of 10^7 sequences.
    """

    max_len: int | None = None
    max_entry: int | None = None
    budget: int = 10_000_000

    def resolve(self, target: frozenset[int]) -> "SearchLimits":
        hull = max((abs(x) for x in target), default=0)
        return SearchLimits(
            self.max_len if self.max_len is not None else len(target) + 4,
            self.max_entry if self.max_entry is not None else max(4 * hull, 1),
            self.budget,
        )


@dataclass(frozen=True)
class TranscriptStep:
    sequence: SequenceB
    sums: tuple[int, ...]
    intersection: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence.to_json(),
            "sums": list(self.sums),
            "intersection": list(self.intersection),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TranscriptStep":
        return cls(
            SequenceB.from_json(obj["sequence"]),
            tuple(int(x) for x in obj["sums"]),
            tuple(int(x) for x in obj["intersection"]),
        )


@dataclass(frozen=True)
class DecompositionCertificate:
    """Witness that ``target`` equals the intersection of the S_B(i).

    ``hull_bound`` is the entry-magnitude cap that was in effect; ``caps``
    records all resolved search limits, since they are an engineering
    choice and not part of the mathematical statement.
    """

    target: tuple[int, ...]
    sequences: tuple[SequenceB, ...]
    hull_bound: int
    caps: SearchLimits
    transcript: tuple[TranscriptStep, ...]

    def to_json(self) -> dict:
        return {
            "schemaVersion": 1,
            "kind": "decomposition-certificate",
            "target": list(self.target),
            "sequences": [s.to_json() for s in self.sequences],
            "hullBound": self.hull_bound,
            "caps": {
                "maxLen": self.caps.max_len,
                "maxEntry": self.caps.max_entry,
                "budget": self.caps.budget,
            },
            "transcript": [t.to_json() for t in self.transcript],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DecompositionCertificate":
        try:
            caps = obj.get("caps", {})
            return cls(
                tuple(int(x) for x in obj["target"]),
                tuple(SequenceB.from_json(s) for s in obj["sequences"]),
                int(obj["hullBound"]),
                SearchLimits(caps.get("maxLen"), caps.get("maxEntry"),
                             caps.get("budget", 10_000_000)),
                tuple(TranscriptStep.from_json(t) for t in obj.get("transcript", ())),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed decomposition certificate: {exc}") from exc


def _symbol(index: int) -> int:
    """Entry values enumerated by magnitude then sign: 1, -1, 2, -2, ..."""
    mag = index // 2 + 1
    return mag if index % 2 == 0 else -mag


class _Budget:
    def __init__(self, total: int) -> None:
        self.left = total

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise ResourceCapError("budget", 0, "decomposition search budget exhausted")


def _search_excluding(target: frozenset[int], bad: int, limits: SearchLimits,
                      budget: _Budget) -> SequenceB | None:
    """First sequence B in graded lexicographic order with target within S_B
    and ``bad`` outside it.

    Sequences are enumerated as non-decreasing tuples of symbol indices
    (each multiset once), lengths first, entries ordered by magnitude then
    sign.  Branches whose reachable positive or negative totals cannot
    cover the target hull are pruned without spending budget on leaves.
    """
    need_hi = max(target)
    need_lo = min(target)
    symbols = [_symbol(i) for i in range(2 * limits.max_entry)]
    top = limits.max_entry

    def rec(start: int, slots: int, pos: int, neg: int,
            picked: list[int]) -> SequenceB | None:
        if slots == 0:
            budget.spend()
            if pos < need_hi or neg > need_lo:
                return None
            sums = _sums_of(picked)
            if bad in sums or not target <= sums:
                return None
            return SequenceB(tuple(picked))
        # prune: even with the largest remaining magnitudes this branch
        # cannot reach the hull
        if pos + slots * top < need_hi or neg - slots * top > need_lo:
            return None
        for idx in range(start, len(symbols)):
            val = symbols[idx]
            picked.append(val)
            hit = rec(idx, slots - 1,
                      pos + val if val > 0 else pos,
                      neg + val if val < 0 else neg,
                      picked)
            if hit is not None:
                return hit
            picked.pop()
        return None

    for length in range(1, limits.max_len + 1):
        hit = rec(0, length, 0, 0, [])
        if hit is not None:
            return hit
    return None


def decompose(a: Iterable[int], limits: SearchLimits | None = None) -> DecompositionCertificate:
    """Write ``a`` as an intersection of subsequence-sum sets.

    Seeds with the nonzero elements of ``a`` (ascending), then for each
    remaining extraneous value finds, by iterative deepening, a sequence
    whose sums contain ``a`` but not that value.  Deterministic: same
    input, same certificate.

    >>> [s.entries for s in decompose({0, 1, 3}).sequences]
    [(1, 3), (1, 2)]
    >>> [s.entries for s in decompose({0}).sequences]
    [(2,), (3,)]
    """
    target = frozenset(int(x) for x in a)
    if not target:
        raise InputError("target set must be nonempty")
    if 0 not in target:
        raise InputError("target set must contain 0")
    limits = (limits or SearchLimits()).resolve(target)

    if target == {0}:
        # No nonzero elements to seed with; the two smallest coprime
        # magnitudes > 1 intersect to {0}.
        seqs = (SequenceB((2,)), SequenceB((3,)))
    else:
        seqs = (SequenceB(tuple(sorted(x for x in target if x != 0))),)

    budget = _Budget(limits.budget)
    sequences: list[SequenceB] = list(seqs)
    transcript: list[TranscriptStep] = []
    current: frozenset[int] | None = None
    for s in sequences:
        sums = _sums_of(s.entries)
        current = sums if current is None else current & sums
        transcript.append(TranscriptStep(s, tuple(sorted(sums)), tuple(sorted(current))))
    assert current is not None

    if not target <= current:
        raise InputError("internal seed does not cover the target")  # unreachable

    for bad in sorted(current - target):
        if bad not in current:
            continue
        found = _search_excluding(target, bad, limits, budget)
        if found is None:
            raise ResourceCapError(
                "max_len", limits.max_len,
                f"no excluding sequence for {bad} within caps "
                f"(max_len={limits.max_len}, max_entry={limits.max_entry})",
            )
        sums = _sums_of(found.entries)
        current = current & sums
        sequences.append(found)
        transcript.append(TranscriptStep(found, tuple(sorted(sums)), tuple(sorted(current))))

    assert current == target
    return DecompositionCertificate(
        tuple(sorted(target)),
        tuple(sequences),
        limits.max_entry,
        limits,
        tuple(transcript),
    )


def verify_decomposition(cert: DecompositionCertificate,
                         max_len: int = VERIFY_LENGTH_CAP) -> bool:
    """Re-check a decomposition by full subset enumeration.

    Each S_B(i) is recomputed by walking all 2^|B| subsets (independent of
    the sparse DP used to build certificates); true iff the intersection
    equals the stored target.
    """
    inter: frozenset[int] | None = None
    for s in cert.sequences:
        n = len(s)
        if n > max_len:
            raise ResourceCapError(
                "max_len", max_len,
                f"verification cap: sequence length {n} exceeds {max_len}",
            )
        entries = s.entries
        sums = [0] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + entries[low.bit_length() - 1]
        got = frozenset(sums)
        inter = got if inter is None else inter & got
    if inter is None:
        return False
    return inter == frozenset(cert.target)

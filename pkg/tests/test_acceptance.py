"""Acceptance suite: one test per criterion, fixed seeds, pinned budgets.

Each criterion is a single test function, so a verbose run shows one
pass/fail line per criterion; each also prints an explicit summary line.
All comparisons are exact (integer arithmetic end to end); the pinned
tolerances are the wall-clock budgets.
"""

from __future__ import annotations

import itertools
import json
import random
import time

from circledeg.abelian import (
    FgAbelianGroup,
    IntegerMatrix,
    smith_normal_form,
    solve_scalar,
    unimodular_rational_eigen_check,
)
from circledeg.bundles import (
    builtin_registry,
    same_base_pair_degree_set,
    vertical_degree_set,
)
from circledeg.cli import main as cli_main
from circledeg.degsets import SequenceB, decompose, subsequence_sums, verify_decomposition
from circledeg.realize import (
    RealizationCertificate,
    build_construction,
    verify_certificate,
)

TORSION_CHAINS = [(), (2,), (3,), (6,), (2, 4), (2, 6), (3, 9), (2, 2, 4)]


def report(n: int, detail: str, elapsed: float, budget: float) -> None:
    print(f"criterion {n}: PASS - {detail} ({elapsed:.2f}s of {budget:.0f}s budget)")


def test_criterion_1_subsequence_sums_match_enumeration():
    """1000 random sequences: DP sums equal brute subset enumeration; < 10s."""
    budget = 10.0
    rng = random.Random(101)
    start = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(1, 12)
        entries = tuple(rng.choice([1, -1]) * rng.randint(1, 8) for _ in range(n))
        got = subsequence_sums(SequenceB(entries)).as_finite_set()
        expected = set()
        for size in range(n + 1):
            for combo in itertools.combinations(entries, size):
                expected.add(sum(combo))
        assert got == expected, f"sums differ for {entries}"
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 1 took {elapsed:.2f}s"
    report(1, "1000 sequences, sums == enumeration", elapsed, budget)


def test_criterion_2_scalar_solutions_match_brute_force():
    """500 random (group, a, c): solve_scalar window equals brute force
    over k in [-1000, 1000]; < 10s."""
    budget = 10.0
    rng = random.Random(202)
    lo, hi = -1000, 1000
    start = time.perf_counter()
    for _ in range(500):
        rank = rng.randint(0, 2)
        torsion = rng.choice(TORSION_CHAINS)
        if rank == 0 and not torsion:
            torsion = (6,)
        g = FgAbelianGroup(rank, torsion)
        free_a = tuple(rng.randint(-4, 4) for _ in range(rank))
        tors_a = tuple(rng.randint(0, d - 1) for d in torsion)
        if rng.random() < 0.5:
            # bias toward solvable instances: c = k0 * a
            k0 = rng.randint(-20, 20)
            free_c = tuple(k0 * x for x in free_a)
            tors_c = tuple((k0 * x) % d for x, d in zip(tors_a, torsion))
        else:
            free_c = tuple(rng.randint(-40, 40) for _ in range(rank))
            tors_c = tuple(rng.randint(0, d - 1) for d in torsion)
        a = g.element(free_a, tors_a)
        c = g.element(free_c, tors_c)
        got = solve_scalar(a, c).window(lo, hi)
        # independent oracle on raw coordinates
        brute = [
            k for k in range(lo, hi + 1)
            if all(k * x == y for x, y in zip(free_a, free_c))
            and all((k * x - y) % d == 0
                    for x, y, d in zip(tors_a, tors_c, torsion))
        ]
        assert got == brute, f"solutions differ for a={a}, c={c}"
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 2 took {elapsed:.2f}s"
    report(2, "500 scalar equations vs brute force on [-1000, 1000]", elapsed, budget)


def test_criterion_3_same_base_pairs_exhaustive():
    """All 576 pairs m, k in [-12, 12] without 0: exact rule matches the
    divisibility formula, and the weak bound contains it; < 1s."""
    budget = 1.0
    base = builtin_registry()["knot-glue-3"]
    values = [x for x in range(-12, 13) if x != 0]
    assert len(values) ** 2 == 576
    start = time.perf_counter()
    for m in values:
        for k in values:
            res = same_base_pair_degree_set(m, k, base)
            assert res.exact
            expected = {0, k // m} if k % m == 0 else {0}
            assert res.degree_set.as_finite_set() == expected, (m, k)
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 3 took {elapsed:.2f}s"
    report(3, "576 same-base pairs match the divisibility formula", elapsed, budget)


def test_criterion_4_realize_zero_k_via_cli(tmp_path):
    """realize --set 0,k for every k in [-10, 10] without 0 yields the
    literal one-summand pair with degree set {0, k}; < 1s."""
    budget = 1.0
    out = tmp_path / "cert.json"
    start = time.perf_counter()
    for k in [x for x in range(-10, 11) if x != 0]:
        code = cli_main(["realize", "--set", f"0,{k}", "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["primes"] == []
        assert obj["multipliers"] == [k]
        pair = obj["pairs"][0]
        assert pair["domain"]["bundle"]["euler"]["free"] == [1]
        assert pair["target"]["bundle"]["euler"]["free"] == [k]
        assert sorted(pair["claimed"]["finite"]) == sorted({0, k})
        assert sorted(obj["finalSet"]["finite"]) == sorted({0, k})
        cert = RealizationCertificate.from_json(obj)
        assert verify_certificate(cert).valid
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 4 took {elapsed:.2f}s"
    report(4, "20 CLI realizations of {0, k} give the literal bundle pair",
           elapsed, budget)


def test_criterion_5_vertical_sets_match_enumeration():
    """50 random (group, a, b): vertical degree set equals brute nonzero
    enumeration on [-60, 60]; < 5s."""
    budget = 5.0
    rng = random.Random(505)
    start = time.perf_counter()
    for _ in range(50):
        rank = rng.randint(0, 1)
        torsion = rng.choice(TORSION_CHAINS)
        if rank == 0 and not torsion:
            rank = 1
        g = FgAbelianGroup(rank, torsion)
        a = g.element(tuple(rng.randint(-3, 3) for _ in range(rank)),
                      tuple(rng.randint(0, d - 1) for d in torsion))
        if rng.random() < 0.5:
            k0 = rng.randint(-15, 15)
            b = k0 * a
        else:
            b = g.element(tuple(rng.randint(-30, 30) for _ in range(rank)),
                          tuple(rng.randint(0, d - 1) for d in torsion))
        got = vertical_degree_set(a, b).window(-60, 60)
        brute = [k for k in range(-60, 61) if k != 0 and k * a == b]
        assert got == brute, f"vertical sets differ for a={a}, b={b}"
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 5 took {elapsed:.2f}s"
    report(5, "50 vertical degree sets vs brute enumeration", elapsed, budget)


def test_criterion_6_decompose_and_realize_battery():
    """Every subset of {-4..4} containing 0 (256 sets) decomposes and
    re-verifies; 100 random hull-6 targets build into verified
    realization certificates; < 120s."""
    budget = 120.0
    start = time.perf_counter()
    universe = [x for x in range(-4, 5) if x != 0]
    count = 0
    for mask in range(1 << len(universe)):
        target = {0} | {universe[i] for i in range(len(universe))
                        if mask >> i & 1}
        cert = decompose(target)
        assert verify_decomposition(cert), f"decomposition failed for {sorted(target)}"
        assert set(cert.target) == target
        count += 1
    assert count == 256

    rng = random.Random(606)
    built = 0
    for _ in range(100):
        size = rng.randint(0, 8)
        pool = [x for x in range(-6, 7) if x != 0]
        target = {0} | set(rng.sample(pool, size))
        cert = build_construction(target, 4)
        report_obj = verify_certificate(cert)
        assert report_obj.valid, (
            f"certificate for {sorted(target)} failed at {report_obj.first_failure}")
        built += 1
    assert built == 100
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 6 took {elapsed:.2f}s"
    report(6, "256 subset decompositions + 100 verified realizations",
           elapsed, budget)


def test_criterion_7_unimodular_rational_eigenvalues():
    """200 random unimodular matrices up to 6x6: every rational
    eigenvalue is +1 or -1; < 5s."""
    budget = 5.0
    rng = random.Random(707)
    start = time.perf_counter()
    for _ in range(200):
        n = rng.randint(2, 6)
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for _ in range(rng.randint(5, 18)):
            op = rng.randrange(3)
            i, j = rng.sample(range(n), 2)
            if op == 0:
                c = rng.choice([-3, -2, -1, 1, 2, 3])
                for col in range(n):
                    rows[j][col] += c * rows[i][col]
            elif op == 1:
                rows[i], rows[j] = rows[j], rows[i]
            else:
                rows[i] = [-x for x in rows[i]]
        m = IntegerMatrix.from_rows(rows)
        unimodular, eigenvalues = unimodular_rational_eigen_check(m)
        assert unimodular, f"|det| != 1 after elementary ops: {rows}"
        assert all(ev in (1, -1) for ev in eigenvalues), (rows, eigenvalues)
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 7 took {elapsed:.2f}s"
    report(7, "200 unimodular matrices have only +-1 rational eigenvalues",
           elapsed, budget)


def _mutations():
    """Named certificate edits with the check id expected to fail first."""

    def primes_size(o):
        o["primes"][0] = 3
        o["multipliers"][0] = 9

    def primes_distinct(o):
        o["primes"][1] = o["primes"][0]
        o["multipliers"][1] = o["primes"][0] * 2

    def primes_primality(o):
        o["primes"][0] = 9
        o["multipliers"][0] = 27

    def alpha_wrong(o):
        o["multipliers"][0] += 1

    def alpha_sign(o):
        o["multipliers"][1] = -o["multipliers"][1]

    def pair_dropped(o):
        del o["pairs"][1]

    def pair_target_euler(o):
        o["pairs"][0]["target"]["bundle"]["euler"]["free"] = [99]

    def pair_summand_euler(o):
        o["pairs"][0]["domain"]["sum"][1]["bundle"]["euler"]["free"] = [4]

    def claim_inflated(o):
        o["pairs"][0]["claimed"]["finite"] = [0, 1, 2, 3, 4]

    def claim_deflated(o):
        o["pairs"][0]["claimed"]["finite"] = [0, 1, 3]

    def cross_missing(o):
        del o["crossChecks"][2]

    def cross_duplicated(o):
        o["crossChecks"].append(dict(o["crossChecks"][0]))

    def cross_multiplier(o):
        o["crossChecks"][0]["multiplier"] = 14

    def cross_verdict(o):
        o["crossChecks"][0]["verdict"] = "skip"

    def combination_unpadded(o):
        del o["combination"]["resultDomain"]["sum"][-1]
        del o["combination"]["resultTarget"]["sum"][-1]

    def combination_rule(o):
        o["combination"]["rule"] = "direct"

    def combination_pad_symbol(o):
        o["combination"]["l"] = "x"

    def final_wrong(o):
        o["finalSet"]["finite"] = [0, 1, 3, 4]

    def target_zero_removed(o):
        o["targetSet"]["finite"] = [1, 3]

    def base_flag_removed(o):
        o["base"]["flags"] = ["aspherical", "scf_pi1", "d_self_finite"]

    def class_label_changed(o):
        o["classLabel"] = "c"

    def fixes_emptied(o):
        o["base"]["fixes"] = []

    def stabilization_faked(o):
        o["stabilizations"] = [{"shift": 3, "fromDimension": 4,
                                "toDimension": 7,
                                "rule": "dimension-stabilization"}]

    def decomposition_sequence(o):
        o["decomposition"]["sequences"][1] = [1, 5]

    def dimension_bumped(o):
        o["dimension"] = 11

    return [
        (primes_size, "primes.size"),
        (primes_distinct, "primes.distinct"),
        (primes_primality, "primes.primality"),
        (alpha_wrong, "alpha.product[0]"),
        (alpha_sign, "alpha.product[1]"),
        (pair_dropped, "pair.count"),
        (pair_target_euler, "pair[0].target-euler"),
        (pair_summand_euler, "pair[0].summand-euler"),
        (claim_inflated, "pair[0].claimed-vs-enumeration"),
        (claim_deflated, "pair[0].claimed-vs-enumeration"),
        (cross_missing, "cross.completeness"),
        (cross_duplicated, "cross.completeness"),
        (cross_multiplier, "cross[0,1,0].nondivisible"),
        (cross_verdict, "cross[0,1,0].nondivisible"),
        (combination_unpadded, "combination.shape"),
        (combination_rule, "combination.shape"),
        (combination_pad_symbol, "combination.shape"),
        (final_wrong, "final.intersection"),
        (target_zero_removed, "target.form"),
        (base_flag_removed, "base.flags"),
        (class_label_changed, "base.class"),
        (fixes_emptied, "base.class"),
        (stabilization_faked, "stabilization.chain"),
        (decomposition_sequence, "decomposition.valid"),
        (dimension_bumped, "combination.dimension"),
    ]


def test_criterion_8_mutations_located():
    """At least 20 systematic certificate mutations: every one is caught
    and the first failing check names the edited claim; < 1s."""
    budget = 1.0
    cert = build_construction({0, 1, 3}, 4)
    assert verify_certificate(cert).valid
    cases = _mutations()
    assert len(cases) >= 20
    start = time.perf_counter()
    for editor, expected in cases:
        obj = json.loads(json.dumps(cert.to_json()))
        editor(obj)
        bad = RealizationCertificate.from_json(obj)
        rep = verify_certificate(bad)
        assert not rep.valid, f"{editor.__name__}: mutation not caught"
        assert rep.first_failure == expected, (
            f"{editor.__name__}: located {rep.first_failure}, expected {expected}")
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"criterion 8 took {elapsed:.2f}s"
    report(8, f"{len(cases)} certificate mutations all located", elapsed, budget)

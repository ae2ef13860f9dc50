"""Realizing a prescribed degree set, with an adversarial verifier.

`build_construction` turns a finite set A containing 0 into a pair of
manifolds whose degree set is exactly A, emitting a certificate in which
every claim carries the rule justifying it.  `verify_certificate`
re-derives each claim independently and pinpoints the first broken one,
so a certificate is evidence, not an assertion.
"""

import json

from circledeg import (
    RealizationCertificate,
    build_construction,
    render_certificate,
    stabilize,
    verify_certificate,
)

cert = build_construction({0, 1, 3}, 4)
print(render_certificate(cert))
print()

report = verify_certificate(cert)
print("verification:", "valid" if report.valid else report.first_failure)
print("checks run:", len(report.checks))
print()

# Tamper with the certificate: shrink a prime so it no longer dominates
# the sequence entries, keeping the arithmetic superficially consistent.
obj = cert.to_json()
obj["primes"][0] = 3
obj["multipliers"][0] = 9
bad = RealizationCertificate.from_json(json.loads(json.dumps(obj)))
report = verify_certificate(bad)
print("tampered certificate valid?", report.valid)
print("first failure:", report.first_failure)
for check in report.checks:
    if not check.ok:
        print("  FAIL", check.id, "-", check.detail)
print()

# The same construction carries up in dimension (shift of at least 3);
# the degree set does not change.
up = stabilize(cert, 9)
print("stabilized to dimension", up.dimension)
print("still valid:", verify_certificate(up).valid)
print()

# Single-sequence targets skip the prime machinery entirely: for {0, k}
# the pair is literally (bundle over b) -> (bundle over k*b).
single = build_construction({0, 7}, 4)
print(render_certificate(single))

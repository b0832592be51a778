"""Nearly superadditive sequences have limits; the checker both verifies
the premise on every split and estimates the limit with a doubling-argument
envelope.

This is the glue between finite-size superadditivity margins and the
existence of the large-n limit of the optimum per node.
"""

import math

from interpolab import PremiseViolation
from interpolab.verify import SequenceProbe, near_superadditive_limit

N = 512

cases = [
    ("a_n = 3n", lambda n: 3.0 * n, 0.0, 3.0),
    ("a_n = n - sqrt(n)", lambda n: n - math.sqrt(n), 0.5, 1.0),
    ("a_n = n - log(n)", lambda n: n - math.log(n), 1.0, 1.0),
    ("a_n = 2n + sin(n)", lambda n: 2 * n + math.sin(n), 3.0, 2.0),
]

for name, fn, constant, limit in cases:
    probe = SequenceProbe(tuple(fn(n) for n in range(1, N + 1)),
                          alpha=0.5, constant=constant)
    est = near_superadditive_limit(probe)
    print(f"{name:22s} estimate {est.estimate:.5f} (limit {limit}), "
          f"{est.checked_splits} splits verified")
    print("   envelope (anchor, ratio, lower bound):",
          [(n, round(r, 4), round(b, 4)) for n, r, b in est.envelope[:3]])

print("\nA sequence that is not nearly superadditive is rejected:")
probe = SequenceProbe(tuple(n * math.sin(n) for n in range(1, N + 1)),
                      alpha=0.5, constant=1.0)
try:
    near_superadditive_limit(probe)
except PremiseViolation as err:
    print(f"  premise violation at n={err.n}, split={err.split}, "
          f"deficit={err.deficit:.3f}")

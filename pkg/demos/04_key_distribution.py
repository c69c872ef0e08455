"""Exact joint distributions of (Alice, Eve, Bob) bits under intercept-resend."""

from groudit import make_groubit
from groudit.protocols import kd_distribution

d = make_groubit()
for alice, eve, bob in [("write", None, "read"), ("write", None, "iread"),
                        ("write", "read", "read"), ("write", "iread", "read"), ("write", "read", "iread")]:
    table = kd_distribution(d, alice, eve, bob)
    who = "(kA, kE, kB)" if eve else "(kA, kB)"
    print(f"alice={alice:6} eve={str(eve):5} bob={bob:5} {who}: {dict(sorted(table.items()))}")

# Eve measuring in Alice's basis copies kA perfectly, so the last row is
# correlated even though Bob's basis differs from Alice's.

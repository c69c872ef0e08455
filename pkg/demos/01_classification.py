"""Biunitaries on the groubit groupoid and on three copies of Z3."""

import time

from groudit import (
    balancers_to_biunitary,
    biunitary_to_balancers,
    count_balancer_pairs,
    enumerate_biunitaries,
    make_cyclic_groudit,
    make_groubit,
)

d = make_groubit()
found = enumerate_biunitaries(d.groupoid)
print(f"groubit groupoid: {len(found)} biunitaries of 24 permutations")
print(f"balancer pairs:   {count_balancer_pairs(d.groupoid)}")
print("canonical crossing F:", ", ".join(f"{m}->{f}" for m, f in balancers_to_biunitary(d).table()))

# every biunitary comes from exactly one balancer pair
for f in found[:3]:
    b = biunitary_to_balancers(f)
    print(f"  sigma={b.sigma} tau={b.tau}  round trip ok: {balancers_to_biunitary(b) == f}")

t = time.perf_counter()
n = len(enumerate_biunitaries(make_cyclic_groudit(3).groupoid))
print(f"Z3 x 3: {n} biunitaries of 362880 ({time.perf_counter() - t:.1f}s)")

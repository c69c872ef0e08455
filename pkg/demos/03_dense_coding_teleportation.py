"""Two classical dits through one groudit, and one groudit through two dits."""

from groudit import make_cyclic_groudit, make_groubit
from groudit.protocols import verify_dense_coding, verify_teleportation

for d in (make_groubit(), make_cyclic_groudit(3)):
    dc = verify_dense_coding(d)
    print(f"dense coding, |Ob|={d.n}: {dc.counts()[0]}/{dc.counts()[1]} inputs decoded; {dc.notes[-1]}")
    tp = verify_teleportation(d)
    print(f"teleportation, |Ob|={d.n}: {tp.counts()[0]}/{tp.counts()[1]} inputs arrive, scalar {tp.scalars[0]}")

print()
print(verify_teleportation(make_groubit()).text())

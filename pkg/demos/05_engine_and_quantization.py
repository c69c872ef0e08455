"""The span engine as an oracle, and the matrices it quantizes to."""

from groudit import balancers_to_biunitary, make_groubit
from groudit.gaf import biunitary_span
from groudit.gaf.semantics import measurement_equations, oracle_equivalence
from groudit.quantize import quantize_protransformation

d = make_groubit()
res = oracle_equivalence(d)
print(f"simulator vs engine: {sum(r.holds for r in res)}/{len(res)} basis inputs agree")
print("scalars:", sorted({(r.op, str(r.scalar)) for r in res if r.scalar != 1}))

for r in measurement_equations(d.groupoid):
    print(f"  {r.name}: {r.holds}" + (f" (scalar {r.scalar})" if r.scalar is not None else ""))

q = quantize_protransformation(biunitary_span(balancers_to_biunitary(d)))
print("Q(F) =")
print(q.integer)

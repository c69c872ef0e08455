"""Relaying a groubit along a chain, and what a lost final Tick leaves behind."""

from groudit import Morphism, make_groubit
from groudit.netsim import MultisetState, run_program
from groudit.protocols import build_state_transfer, chain_registry, failed_final_tick_report, party_names

d = make_groubit()
names = party_names(3)
prog = build_state_transfer(d, 3)
init = MultisetState.basis([("P0", d, Morphism(1, 1))])
out, trace = run_program(chain_registry(d, names), init, prog)
print("trace for input (1,1):")
print(trace.text())

print("\nfinal Tick lost:")
for m, row in failed_final_tick_report(d).items():
    print(f"  input {m}: logical value recovered {row['logical_recovered']}, retry completes {row['retry_completes']}")

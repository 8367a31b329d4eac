#!/usr/bin/env python3
"""
02_gossip_averaging.py

Gossip dynamics on a three-qubit path: the trajectory relaxes to the exact
permutation average of the initial state.  Purity only ever decreases and the
Dicke populations are frozen, which is precisely why this family cannot
produce pure consensus states.
"""

import numpy as np

from qconsensus import NetworkTopology, gossip_fixed_point, ket_to_density, bitstring_ket
from qconsensus.dynamics import ChannelFamily
from qconsensus.simulator import Schedule, run

topology = NetworkTopology(m=3, neighborhoods=((1, 2), (2, 3)))
rho0 = ket_to_density(bitstring_ket("001"))

result = run(rho0, topology, ChannelFamily.gossip(0.5), Schedule.cyclic((0, 1)), 500)
target = gossip_fixed_point(rho0, 3)

print("start: |001><001|, alternating gossip on {1,2}, {2,3}, alpha = 0.5")
print()
print("step   purity   v_total   max|rho - rho_avg|")
state = rho0
for step in (1, 5, 20, 100, 500):
    rec = result.records[step - 1]
    # re-run up to `step` to inspect the intermediate state
    partial = run(rho0, topology, ChannelFamily.gossip(0.5), Schedule.cyclic((0, 1)), step)
    dist = np.max(np.abs(partial.final_state - target))
    print(f"{rec.step:>4}   {rec.purity:.4f}   {rec.v_total:.4f}    {dist:.3e}")

print()
print("limit is the uniform mixture over {|001>, |010>, |100>}:")
print(np.round(np.real(np.diag(target)), 4))
print("purity of the limit:", f"{result.records[-1].purity:.4f}", "(= 1/3)")

pops0 = result.records[0].dicke_populations
pops_end = result.records[-1].dicke_populations
print()
print("dicke populations, step 1:  ", [f"{p:.4f}" for p in pops0])
print("dicke populations, step 500:", [f"{p:.4f}" for p in pops_end])
print("(unchanged: gossip commutes with the permutation projectors)")

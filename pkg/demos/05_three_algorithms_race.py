#!/usr/bin/env python3
"""
05_three_algorithms_race.py

Head-to-head comparison of the three symmetrizing families from the same
random initial state on the three-qubit path, alternating the two
neighborhoods.  Gossip loses purity, the Dicke-preparing family recovers
some, and the single-measurement family typically ends purest because it
preserves only the two extremal eigenspaces of the conserved observable.

The same experiment is available from the command line:
    qconsensus compare --config <config.yaml>
"""

import numpy as np

from qconsensus import NetworkTopology, purity
from qconsensus.dynamics import ChannelFamily
from qconsensus.simulator import Schedule, random_density, run

topology = NetworkTopology(m=3, neighborhoods=((1, 2), (2, 3)))
schedule = Schedule.cyclic((0, 1))
steps = 300

rho0 = random_density(2026, 8)
print(f"initial purity: {purity(rho0):.4f}")
print()
print("family   final purity   v_total - 3   smc population")
rows = {}
for family in (ChannelFamily.gossip(0.5), ChannelFamily.ssc(), ChannelFamily.smc()):
    result = run(rho0, topology, family, schedule, steps)
    last = result.records[-1]
    rows[family.kind] = last
    print(f"{family.kind:<8} {last.purity:<14.4f} {last.v_total - 3:<13.3e} {last.smc_population:.4f}")

print()
print("typical ordering: smc >= ssc >= gossip")
print()
print("distribution over 50 random starts")
print("----------------------------------")
finals = {"gossip": [], "ssc": [], "smc": []}
ordered = 0
for seed in range(50):
    rho0 = random_density(500 + seed, 8)
    row = {}
    for family in (ChannelFamily.gossip(0.5), ChannelFamily.ssc(), ChannelFamily.smc()):
        result = run(rho0, topology, family, schedule, steps, validate=False)
        row[family.kind] = result.records[-1].purity
        finals[family.kind].append(row[family.kind])
    ordered += row["smc"] >= row["ssc"] >= row["gossip"]
for kind, values in finals.items():
    print(f"median final purity {kind:<8} {np.median(values):.3f}")
print(f"ordering smc >= ssc >= gossip held in {ordered}/50 trials")

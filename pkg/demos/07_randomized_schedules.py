#!/usr/bin/env python3
"""
07_randomized_schedules.py

Neighborhoods do not have to be scheduled carefully: drawing them i.i.d.
from any fixed positive distribution still gives convergence in probability.
The Monte-Carlo estimator below tracks P[Lyapunov gap < gamma] across
horizons; it climbs to 1 for both consensus families, and cyclic vs random
runs land on the same limit value.
"""

import numpy as np

from qconsensus import NetworkTopology
from qconsensus.dynamics import ChannelFamily
from qconsensus.simulator import Schedule, convergence_probability, random_density, run

topology = NetworkTopology(m=3, neighborhoods=((1, 2), (2, 3)))
rho0 = random_density(41, 8)
gamma = 0.01
trials = 120

print(f"P[gap < {gamma}] over {trials} randomized trials (uniform edge choice)")
print()
print("family   horizon 10   horizon 50   horizon 200")
for family in (ChannelFamily.ssc(), ChannelFamily.smc()):
    estimates = [
        convergence_probability(rho0, topology, family, gamma, horizon, trials, seed=7)
        for horizon in (10, 50, 200)
    ]
    print(f"{family.kind:<8} {estimates[0]:<12.3f} {estimates[1]:<12.3f} {estimates[2]:.3f}")

print()
print("cyclic vs randomized limits (ssc family, horizon 500)")
cyclic = run(rho0, topology, ChannelFamily.ssc(), Schedule.cyclic(), 500)
v_ref = cyclic.records[-1].v_total
print(f"cyclic final v_total: {v_ref:.12f}")
worst = 0.0
for seed in range(10):
    rnd = run(rho0, topology, ChannelFamily.ssc(), Schedule.random(seed=seed), 500)
    worst = max(worst, abs(rnd.records[-1].v_total - v_ref))
print(f"max |difference| over 10 random-schedule runs: {worst:.3e}")

print()
print("weighted edge selection also works, as long as every weight is positive:")
weighted = NetworkTopology(m=3, neighborhoods=((1, 2), (2, 3)), probabilities=(0.8, 0.2))
p = convergence_probability(rho0, weighted, ChannelFamily.smc(), gamma, 200, trials, seed=3)
print(f"P[gap < {gamma} at horizon 200] with weights (0.8, 0.2): {p:.3f}")

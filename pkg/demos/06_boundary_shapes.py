"""Boundary shapes: what hangs past the far agent does not matter early on.

Four interconnections share the same first agents: a pure 27-agent path and
three generalized paths whose spine ends at agent 17 with different subtree
shapes behind it (two chains, three chains, a ten-leaf star). Because the
wave couplings are local, the early responses of the front agents are
identical across all four; the boundary shape only shows up once the wave
has reached it and its reflection has travelled back.

With an asymmetric positional coupling, the amplification verdict transfers
unchanged: the disturbance grows along the spine of every shape.
"""

import numpy as np

from wavestring import (
    AgentDynamics,
    Polynomial,
    RationalTF,
    SimConfig,
    Topology,
    build_network,
    overshoot_metrics,
    simulate,
    tf_normalize,
)

front = tf_normalize(Polynomial([4 / 3, 4 / 3]), Polynomial([0, 0, 1, 1 / 3]))
sym = AgentDynamics(front, front)
asym = AgentDynamics(front, RationalTF(front.num.scaled(2.5 / 4), front.den, front.p))

topologies = {
    "path of 27": Topology.path(27),
    "spine 17 + two chains of 5": Topology.with_tail_branches(17, [5, 5]),
    "spine 17 + chains 4,3,3": Topology.with_tail_branches(17, [4, 3, 3]),
    "spine 17 + star of 10": Topology.with_tail_branches(17, [1] * 10),
}

cfg = SimConfig(dt=2e-3, T_final=30.0)
runs = {name: simulate(build_network(t, sym), cfg) for name, t in topologies.items()}
reference = runs["path of 27"]

print("symmetric coupling: when does agent 5 first differ from the path case?")
for name, traj in runs.items():
    if traj is reference:
        continue
    gap = np.abs(traj.agent(5) - reference.agent(5))
    for level in (1e-6, 1e-3, 1e-2):
        k = np.argmax(gap > level)
        t_first = reference.times[k] if gap[k] > level else float("inf")
        print(f"  {name:<28} first gap > {level:.0e} at t = {t_first:6.2f} s")
    print()

print("the divergence times trail the wave's trip to agent 17 and back; the")
print("finer the tolerance, the earlier its dispersive precursor registers.")
print()

print("asymmetric coupling: spine peaks still grow in every shape")
cfg_asym = SimConfig(dt=2e-3, T_final=40.0)
print(f"{'agent':>6}" + "".join(f"{n[:24]:>26}" for n in topologies))
peaks = {}
for name, topo in topologies.items():
    traj = simulate(build_network(topo, asym), cfg_asym)
    peaks[name] = overshoot_metrics(traj, 1.0)
for agent in (4, 8, 12, 14):
    row = f"{agent:>6}"
    for name in topologies:
        row += f"{peaks[name][agent].peak:>26.3f}"
    print(row)

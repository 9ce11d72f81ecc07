"""Decomposing a 16-node network: pendant peeling, splitting, condensing.

Pendant subtrees have no routing choice, so their edges are fixed up front
and their values folded inward. The remaining 2-core splits at node 0 (a
source that is also an articulation node) into two balanced partitions, with
node 0 playing a different role in each: net supplier of +6 on one side, net
consumer of -1 on the other. Each partition is then condensed into a small
dual graph of "sampled" and "un-sampled" super nodes that steers edge
selection.
"""

from radialflow import initial_values, net_concad, pre_process
from radialflow.condense import PolytreeSet
from radialflow.decompose import islander_partition
from radialflow.fixtures import fig6_network

net = fig6_network()
values = initial_values(net)
print(f"original network: {net.node_count} nodes, {len(net.edges)} edges, "
      f"sources {net.sources()}")

sampled, core, core_values, sources = pre_process(net, values)
print(f"\npendant peeling fixed {len(sampled)} edges: {sampled}")
print(f"2-core: nodes {list(core.nodes)}")
print("folded values on the 2-core:",
      {v: core_values[v] for v in core.nodes if core_values[v] != values[v]})

pset = islander_partition(core, sources, core_values, pre_sampled=sampled)
print(f"\nsplit at source articulation nodes -> {len(pset.partitions)} partitions")
for part in pset.partitions:
    print(f"  partition {part.index}: nodes {sorted(part.nodes)}, "
          f"sources {part.sources}")
print("replica values at the split node:", pset.separation_adjustments)

print("\ninitial dual graphs (one super node per polytree / sink component):")
for part in pset.partitions:
    dual, _, _ = net_concad(
        part, PolytreeSet.from_sources(part.sources), dict(part.values)
    )
    for s in dual.supers.values():
        print(f"  partition {part.index}: {s.kind:9s} members={s.members} "
              f"value={s.supply_value:+.0f}")

"""When greedy sampling hits a capacity wall, one swap repairs it.

Two sources (20 and 30 units) serve four sinks through capacitated lines.
Greedy growth covers every node but strands 10 units at node 4 while node 2
still wants 10: the connecting paths inside the sampled forest are
saturated. The repair search deletes two saturated assignments and inserts
two fresh edges, after which the unique flows fit every capacity.
"""

from radialflow import initial_values, verify_solution
from radialflow.decompose import decompose
from radialflow.fixtures import fig8_network
from radialflow.sampler import rewire, run_partition
from radialflow.treeflow import flows_on_polyforest

net = fig8_network()
part = decompose(net).partitions[0]

sampled, residuals, _ = run_partition(part)
print("sampled edges in order:", sampled)
print("residual values after sampling:", residuals)
print("  -> node 2 is short 10 units while node 4 holds a stranded surplus")

repaired, resolved = rewire(part, part.values, sampled)
inserted = sorted(set((min(e), max(e)) for e in repaired)
                  - set((min(e), max(e)) for e in sampled))
deleted = sorted(set((min(e), max(e)) for e in sampled)
                 - set((min(e), max(e)) for e in repaired))
print(f"\nrewire resolved={resolved}: inserted {inserted}, deleted {deleted}")

sol = flows_on_polyforest(net, repaired, initial_values(net))
print("final flows:")
for (i, j), x in sorted(sol.flows.items()):
    cap = net.edge_between(i, j).capacity
    print(f"  {i} -> {j}: {x:5.1f}  (capacity {cap})")
print("feasible:", verify_solution(net, sol).feasible())

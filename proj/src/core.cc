/*******************************************************************************
 * @file:   core.cc
 ******************************************************************************/
#include "gbl/core.h"

#include <algorithm>
#include <queue>

namespace gbl {

std::vector<MachineIndex> orient_systems(const RockGraph &graph, const std::vector<std::optional<MachineIndex>> &root) {
  std::vector<MachineIndex> head(graph.edge_count(), 0);
  for (std::size_t s = 0; s < graph.systems().size(); ++s) {
    const System &system = graph.systems()[s];
    switch (system.kind) {
    case SystemKind::kIsolated:
      break;
    case SystemKind::kTree: {
      const MachineIndex start = root.at(s).value_or(system.nodes.front());
      std::vector<bool> seen(graph.node_count(), false);
      std::queue<MachineIndex> queue;
      queue.push(start);
      seen[start] = true;
      while (!queue.empty()) {
        const MachineIndex v = queue.front();
        queue.pop();
        for (const Incidence &inc : graph.incident(v)) {
          if (!seen[inc.other]) {
            seen[inc.other] = true;
            head[inc.edge] = inc.other;
            queue.push(inc.other);
          }
        }
      }
      break;
    }
    case SystemKind::kCycle: {
      const MachineIndex start = system.nodes.front();
      MachineIndex v = start;
      std::size_t previous = graph.edge_count();
      do {
        const auto incident = graph.incident(v);
        const Incidence &next = incident[0].edge != previous ? incident[0] : incident[1];
        head[next.edge] = next.other;
        previous = next.edge;
        v = next.other;
      } while (v != start);
      break;
    }
    default:
      throw InvariantViolation("cannot orient a system with more than one cycle or pendant trees");
    }
  }
  return head;
}

std::vector<PlacedPebble> placed_pebbles(const GuessContext &ctx, const std::vector<MachineIndex> &pebble_at) {
  std::vector<PlacedPebble> out;
  out.reserve(ctx.pebbles.size());
  for (std::size_t p = 0; p < ctx.pebbles.size(); ++p) {
    const Pebble &pebble = ctx.pebbles[p];
    out.push_back(PlacedPebble{pebble.weight, pebble.eligible, pebble.job, pebble.pair, pebble_at[p]});
  }
  return out;
}

std::vector<Weight> pebble_loads(const GuessContext &ctx, const std::vector<MachineIndex> &pebble_at) {
  std::vector<Weight> pl(ctx.machine_count(), 0);
  for (std::size_t p = 0; p < ctx.pebbles.size(); ++p) {
    pl[pebble_at[p]] += ctx.pebbles[p].weight;
  }
  return pl;
}

std::vector<MachineIndex> initial_placement(const GuessContext &ctx) {
  std::vector<MachineIndex> at(ctx.pebbles.size());
  for (std::size_t p = 0; p < ctx.pebbles.size(); ++p) {
    at[p] = ctx.pebbles[p].eligible.front();
  }
  return at;
}

CoreSolution finish_solution(
    const Instance &instance,
    const GuessContext &ctx,
    const std::vector<MachineIndex> &pebble_at,
    const std::vector<MachineIndex> &rock_head
) {
  CoreSolution solution;
  solution.assignment = assemble_assignment(ctx, instance.jobs.size(), pebble_at, rock_head);
  const std::vector<Weight> loads = machine_loads(instance, solution.assignment);
  solution.makespan = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  return solution;
}

} // namespace gbl

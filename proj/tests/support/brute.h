/*******************************************************************************
 * Unpruned enumerators used as ground truth by the tests.
 *
 * @file:   brute.h
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "gbl/instance.h"
#include "gbl/preprocess.h"
#include "gbl/rock_graph.h"

namespace gbl::testing {

// Minimum makespan over every eligible assignment.
inline Weight brute_opt(const Instance &instance) {
  const std::size_t n = instance.jobs.size();
  std::vector<std::size_t> choice(n, 0);
  Weight best = std::numeric_limits<Weight>::max();
  for (;;) {
    std::vector<Weight> loads(instance.machines.size());
    for (MachineIndex v = 0; v < loads.size(); ++v) {
      loads[v] = instance.machines[v].dedicated_load;
    }
    for (JobIndex j = 0; j < n; ++j) {
      loads[instance.jobs[j].eligible[choice[j]]] += instance.jobs[j].weight;
    }
    best = std::min(best, loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end()));
    std::size_t j = 0;
    while (j < n && ++choice[j] == instance.jobs[j].eligible.size()) {
      choice[j++] = 0;
    }
    if (j == n) {
      return best;
    }
  }
}

// Minimum rock weight into `subset` over orientations with at most one
// incoming edge per node, by trying all 2^m orientations.
inline std::optional<Weight> brute_min_rock_load(const RockGraph &graph, const std::vector<bool> &subset) {
  const std::size_t m = graph.edge_count();
  std::optional<Weight> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> indegree(graph.node_count(), 0);
    Weight into = 0;
    bool ok = true;
    for (std::size_t e = 0; e < m && ok; ++e) {
      const Rock &rock = graph.edge(e);
      const MachineIndex head = ((mask >> e) & 1) != 0 ? rock.b : rock.a;
      ok = ++indegree[head] <= 1;
      if (subset[head]) {
        into += rock.weight;
      }
    }
    if (ok && (!best || into < *best)) {
      best = into;
    }
  }
  return best;
}

} // namespace gbl::testing

/*******************************************************************************
 * @file:   rock_graph.cc
 ******************************************************************************/
#include "gbl/rock_graph.h"

#include <algorithm>
#include <queue>

namespace gbl {

const char *to_string(SystemKind kind) {
  switch (kind) {
  case SystemKind::kIsolated:
    return "isolated";
  case SystemKind::kTree:
    return "tree";
  case SystemKind::kCycle:
    return "cycle";
  case SystemKind::kUnicyclic:
    return "unicyclic";
  case SystemKind::kMultiCycle:
    return "multi_cycle";
  }
  return "isolated";
}

RockGraph::RockGraph(std::size_t node_count, std::vector<Rock> rocks)
    : _rocks(std::move(rocks)),
      _incidence(node_count),
      _system_of(node_count, 0) {
  for (std::size_t e = 0; e < _rocks.size(); ++e) {
    Rock &rock = _rocks[e];
    if (rock.a > rock.b) {
      std::swap(rock.a, rock.b);
    }
    if (rock.a == rock.b || rock.b >= node_count) {
      throw std::invalid_argument("rock endpoints must be two distinct machines");
    }
    _incidence[rock.a].push_back({e, rock.b});
    _incidence[rock.b].push_back({e, rock.a});
  }
  for (auto &list : _incidence) {
    std::sort(list.begin(), list.end(), [](const Incidence &x, const Incidence &y) {
      return x.other != y.other ? x.other < y.other : x.edge < y.edge;
    });
  }

  std::vector<bool> seen(node_count, false);
  for (MachineIndex root = 0; root < node_count; ++root) {
    if (seen[root]) {
      continue;
    }
    System system;
    std::queue<MachineIndex> queue;
    queue.push(root);
    seen[root] = true;
    while (!queue.empty()) {
      const MachineIndex v = queue.front();
      queue.pop();
      system.nodes.push_back(v);
      for (const Incidence &inc : _incidence[v]) {
        if (!seen[inc.other]) {
          seen[inc.other] = true;
          queue.push(inc.other);
        }
      }
    }
    std::sort(system.nodes.begin(), system.nodes.end());
    for (const MachineIndex v : system.nodes) {
      for (const Incidence &inc : _incidence[v]) {
        if (_rocks[inc.edge].a == v) {
          system.edges.push_back(inc.edge);
        }
      }
    }
    std::sort(system.edges.begin(), system.edges.end());

    const std::size_t n = system.nodes.size();
    const std::size_t m = system.edges.size();
    if (m == 0) {
      system.kind = SystemKind::kIsolated;
    } else if (m + 1 == n) {
      system.kind = SystemKind::kTree;
    } else if (m == n) {
      const bool all_degree_two = std::all_of(system.nodes.begin(), system.nodes.end(), [&](MachineIndex v) {
        return _incidence[v].size() == 2;
      });
      system.kind = all_degree_two ? SystemKind::kCycle : SystemKind::kUnicyclic;
    } else {
      system.kind = SystemKind::kMultiCycle;
    }

    for (const MachineIndex v : system.nodes) {
      _system_of[v] = _systems.size();
    }
    _systems.push_back(std::move(system));
  }
}

bool RockGraph::is_reduced() const {
  return std::all_of(_systems.begin(), _systems.end(), [](const System &s) {
    switch (s.kind) {
    case SystemKind::kIsolated:
    case SystemKind::kTree:
      return true;
    case SystemKind::kCycle:
      return s.nodes.size() >= 3;
    default:
      return false;
    }
  });
}

namespace {
Weight cost_into(const std::vector<bool> &subset, MachineIndex head, Weight w) {
  return subset[head] ? w : 0;
}

// Rooted DP: `down` = node already receives its parent edge, so every child
// edge points downwards; `free` = the node may take one edge from a child.
Weight tree_min_load(const RockGraph &graph, const System &system, const std::vector<bool> &subset) {
  const MachineIndex root = system.nodes.front();
  std::vector<MachineIndex> order;
  std::vector<std::size_t> parent_edge(graph.node_count(), SIZE_MAX);
  std::vector<bool> visited(graph.node_count(), false);
  std::vector<MachineIndex> stack{root};
  visited[root] = true;
  while (!stack.empty()) {
    const MachineIndex v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (const Incidence &inc : graph.incident(v)) {
      if (!visited[inc.other]) {
        visited[inc.other] = true;
        parent_edge[inc.other] = inc.edge;
        stack.push_back(inc.other);
      }
    }
  }

  std::vector<Weight> down(graph.node_count(), 0);
  std::vector<Weight> free(graph.node_count(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const MachineIndex v = *it;
    Weight base = 0;
    for (const Incidence &inc : graph.incident(v)) {
      if (inc.edge == parent_edge[v]) {
        continue;
      }
      const Weight w = graph.edge(inc.edge).weight;
      base += down[inc.other] + cost_into(subset, inc.other, w);
    }
    Weight best = base;
    for (const Incidence &inc : graph.incident(v)) {
      if (inc.edge == parent_edge[v]) {
        continue;
      }
      const Weight w = graph.edge(inc.edge).weight;
      const Weight child_down = down[inc.other] + cost_into(subset, inc.other, w);
      const Weight child_up = free[inc.other] + cost_into(subset, v, w);
      best = std::min(best, base - child_down + child_up);
    }
    down[v] = base;
    free[v] = best;
  }
  return free[root];
}

// Exactly two orientations: all tree edges point away from the cycle and the
// cycle is traversed in one of its two directions.
Weight unicyclic_min_load(const RockGraph &graph, const System &system, const std::vector<bool> &subset) {
  std::vector<std::size_t> degree(graph.node_count(), 0);
  std::vector<bool> removed_edge(graph.edge_count(), false);
  std::vector<MachineIndex> leaves;
  for (const MachineIndex v : system.nodes) {
    degree[v] = graph.incident(v).size();
    if (degree[v] == 1) {
      leaves.push_back(v);
    }
  }
  Weight fixed = 0;
  while (!leaves.empty()) {
    const MachineIndex leaf = leaves.back();
    leaves.pop_back();
    for (const Incidence &inc : graph.incident(leaf)) {
      if (removed_edge[inc.edge]) {
        continue;
      }
      removed_edge[inc.edge] = true;
      fixed += cost_into(subset, leaf, graph.edge(inc.edge).weight);
      --degree[leaf];
      if (--degree[inc.other] == 1) {
        leaves.push_back(inc.other);
      }
      break;
    }
  }

  MachineIndex start = SIZE_MAX;
  for (const MachineIndex v : system.nodes) {
    if (degree[v] == 2) {
      start = v;
      break;
    }
  }
  Weight forward = 0;
  Weight backward = 0;
  MachineIndex v = start;
  std::size_t previous = SIZE_MAX;
  do {
    std::size_t next_edge = SIZE_MAX;
    MachineIndex next = 0;
    for (const Incidence &inc : graph.incident(v)) {
      if (!removed_edge[inc.edge] && inc.edge != previous) {
        next_edge = inc.edge;
        next = inc.other;
        break;
      }
    }
    const Weight w = graph.edge(next_edge).weight;
    forward += cost_into(subset, next, w);
    backward += cost_into(subset, v, w);
    previous = next_edge;
    v = next;
  } while (v != start);
  return fixed + std::min(forward, backward);
}
} // namespace

RockLoad min_rock_load_into(const RockGraph &graph, const std::vector<bool> &subset) {
  if (subset.size() != graph.node_count()) {
    throw std::invalid_argument("subset mask does not match the rock graph's node set");
  }
  Weight total = 0;
  for (const System &system : graph.systems()) {
    switch (system.kind) {
    case SystemKind::kIsolated:
      break;
    case SystemKind::kTree:
      total += tree_min_load(graph, system, subset);
      break;
    case SystemKind::kCycle:
    case SystemKind::kUnicyclic:
      total += unicyclic_min_load(graph, system, subset);
      break;
    case SystemKind::kMultiCycle:
      return RockLoad::unreachable();
    }
  }
  return RockLoad::of(total);
}

} // namespace gbl

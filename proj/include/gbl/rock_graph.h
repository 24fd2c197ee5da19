/*******************************************************************************
 * Graph of rocks over machines and its decomposition into systems.
 *
 * @file:   rock_graph.h
 ******************************************************************************/
#pragma once

#include <span>
#include <vector>

#include "gbl/common.h"

namespace gbl {

// A heavy job with exactly two eligible machines, seen as an edge.
struct Rock {
  JobIndex job = 0;
  MachineIndex a = 0; // a < b
  MachineIndex b = 0;
  Weight weight = 0;

  [[nodiscard]] MachineIndex other(MachineIndex v) const { return v == a ? b : a; }
};

enum class SystemKind {
  kIsolated,
  kTree,
  kCycle,      // every node has degree two
  kUnicyclic,  // one cycle with pendant trees (reduced away by preprocessing)
  kMultiCycle, // more edges than nodes
};

const char *to_string(SystemKind kind);

// Connected component of the rock graph.
struct System {
  SystemKind kind = SystemKind::kIsolated;
  std::vector<MachineIndex> nodes; // ascending
  std::vector<std::size_t> edges;  // ascending
};

struct Incidence {
  std::size_t edge;
  MachineIndex other;
};

class RockGraph {
public:
  RockGraph() = default;
  RockGraph(std::size_t node_count, std::vector<Rock> rocks);

  [[nodiscard]] std::size_t node_count() const { return _incidence.size(); }
  [[nodiscard]] std::size_t edge_count() const { return _rocks.size(); }
  [[nodiscard]] const std::vector<Rock> &edges() const { return _rocks; }
  [[nodiscard]] const Rock &edge(std::size_t e) const { return _rocks[e]; }

  // Incident edges of v, sorted by (other endpoint, edge index).
  [[nodiscard]] std::span<const Incidence> incident(MachineIndex v) const { return _incidence[v]; }

  [[nodiscard]] const std::vector<System> &systems() const { return _systems; }
  [[nodiscard]] std::size_t system_of(MachineIndex v) const { return _system_of[v]; }

  // Every component is a tree, a cycle of length >= 3 or an isolated node.
  [[nodiscard]] bool is_reduced() const;

private:
  std::vector<Rock> _rocks;
  std::vector<std::vector<Incidence>> _incidence;
  std::vector<System> _systems;
  std::vector<std::size_t> _system_of;
};

// Minimum over orientations with at most one incoming edge per node of the
// rock weight directed into `subset`. Empty when no such orientation exists.
struct RockLoad {
  bool reachable = false;
  Weight value = 0;

  static RockLoad unreachable() { return {}; }
  static RockLoad of(Weight w) { return {true, w}; }
  bool operator==(const RockLoad &) const = default;
};

// `subset` is a membership mask over the graph's nodes.
RockLoad min_rock_load_into(const RockGraph &graph, const std::vector<bool> &subset);

} // namespace gbl

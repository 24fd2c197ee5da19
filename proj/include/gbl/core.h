/*******************************************************************************
 * Result type shared by the per-guess cores and helpers for turning rock
 * orientations and pebble placements into complete assignments.
 *
 * @file:   core.h
 ******************************************************************************/
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "gbl/declaration.h"
#include "gbl/preprocess.h"

namespace gbl {

struct CoreSolution {
  JobAssignment assignment;
  Weight makespan = 0;
};

struct CoreOutcome {
  std::variant<CoreSolution, Declaration> result;
  std::size_t pushes = 0;

  [[nodiscard]] bool accepted() const { return std::holds_alternative<CoreSolution>(result); }
};

// Orients every system so each node receives at most one edge. Trees are
// rooted at `root[s]` when given (else their lowest node); cycles run from
// their lowest node along its first incident edge. Returns the head of each edge.
std::vector<MachineIndex> orient_systems(const RockGraph &graph, const std::vector<std::optional<MachineIndex>> &root);

// Snapshot of the context's pebbles at the given placement.
std::vector<PlacedPebble> placed_pebbles(const GuessContext &ctx, const std::vector<MachineIndex> &pebble_at);

// Pebble load per machine.
std::vector<Weight> pebble_loads(const GuessContext &ctx, const std::vector<MachineIndex> &pebble_at);

// Each pebble on its lowest-indexed eligible machine.
std::vector<MachineIndex> initial_placement(const GuessContext &ctx);

// Builds the solution for the original instance and recomputes its makespan.
CoreSolution finish_solution(
    const Instance &instance,
    const GuessContext &ctx,
    const std::vector<MachineIndex> &pebble_at,
    const std::vector<MachineIndex> &rock_head
);

} // namespace gbl

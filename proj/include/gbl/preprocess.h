/*******************************************************************************
 * Per-guess preprocessing: splits the jobs into rocks and pebbles for a
 * guessed makespan t and applies the structural reductions that every
 * assignment of makespan <= t must respect.
 *
 * @file:   preprocess.h
 ******************************************************************************/
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gbl/common.h"
#include "gbl/declaration.h"
#include "gbl/instance.h"
#include "gbl/rational.h"
#include "gbl/rock_graph.h"

namespace gbl {

// A movable job. Pebbles created from a pair of parallel rocks carry the pair
// instead of a job: placing such a pebble at x sends the heavier rock to x and
// the lighter one to the other endpoint.
struct Pebble {
  Weight weight = 0;
  std::vector<MachineIndex> eligible; // ascending
  std::optional<JobIndex> job;
  std::optional<std::pair<JobIndex, JobIndex>> pair; // (heavier, lighter)

  bool operator==(const Pebble &) const = default;
};

struct ReductionStep {
  enum class Kind { kFoldSingle, kFoldPendant, kMergeParallel, kDropEmptyPebble };

  Kind kind = Kind::kFoldSingle;
  std::vector<JobIndex> jobs;
  std::vector<MachineIndex> machines;
  Weight weight = 0;
};

const char *to_string(ReductionStep::Kind kind);

struct GuessContext {
  Weight t = 0;
  SolveMode mode = SolveMode::kGeneral;
  std::optional<Rational> beta;
  std::vector<Weight> dl;
  std::vector<Pebble> pebbles;
  RockGraph rocks;
  std::vector<ReductionStep> log;
  // Jobs whose machine is already fixed, by original job index.
  std::vector<std::optional<MachineIndex>> forced;

  [[nodiscard]] std::size_t machine_count() const { return dl.size(); }
};

struct JobClasses {
  std::vector<JobIndex> rocks;
  std::vector<JobIndex> pebbles;
};

// Splits the multi-machine jobs. Throws InputError for a rock with more than
// two eligible machines.
JobClasses classify_jobs(const Instance &instance, Weight t, SolveMode mode, const std::optional<Rational> &beta);

bool is_rock_weight(Weight w, Weight t, SolveMode mode, const std::optional<Rational> &beta, Weight heavy_weight);

using ReduceResult = std::variant<GuessContext, Declaration>;

ReduceResult reduce(const Instance &instance, Weight t, SolveMode mode, const std::optional<Rational> &beta);

// Rebuilds a plain instance from a context: machines carry dl, pebbles and
// rocks become jobs.
Instance to_instance(const GuessContext &ctx, const Instance &original);

// Orientation: for each rock edge, the machine it is directed into.
JobAssignment assemble_assignment(
    const GuessContext &ctx,
    std::size_t job_count,
    const std::vector<MachineIndex> &pebble_at,
    const std::vector<MachineIndex> &rock_head
);

// Per-machine load of a complete assignment, including dedicated loads.
std::vector<Weight> machine_loads(const Instance &instance, const JobAssignment &assignment);

std::string reduction_log_json_lines(const GuessContext &ctx, const Instance &instance);

} // namespace gbl

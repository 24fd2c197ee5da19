/*******************************************************************************
 * Binary search over the guessed makespan with per-guess core dispatch.
 *
 * @file:   search_driver.h
 ******************************************************************************/
#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "gbl/core.h"
#include "gbl/instance.h"
#include "gbl/rational.h"
#include "gbl/trace.h"

namespace gbl {

enum class CoreKind { kReduction, kMatching, kTwoValued, kTwoValuedImproved, kRelief, kGeneral };

const char *to_string(CoreKind kind);

struct SolveStats {
  std::size_t core_invocations = 0;
  std::size_t pushes = 0;
  std::vector<Weight> guesses;
};

struct Solution {
  JobAssignment assignment;
  Weight makespan = 0;
  Weight t_star = 0;
  Weight lower_bound = 0;
  Rational ratio_certified{1};
  std::vector<Declaration> declarations;
  SolveStats stats;
  SolveMode mode = SolveMode::kGeneral;
  std::optional<Rational> beta;
};

struct GuessOutcome {
  CoreKind core = CoreKind::kReduction;
  CoreOutcome outcome;
};

// Reduces at t and runs the core for the regime t falls in.
GuessOutcome run_guess(const Instance &instance, const ValidationReport &report, Weight t, const CoreHooks &hooks = {});

// Approximation ratio the validated mode guarantees against t_star.
Rational certified_ratio_bound(SolveMode mode, const std::optional<Rational> &beta, Weight heavy, Weight light);

struct SearchBounds {
  Weight lo = 1;
  Weight hi = 1;
};

// lo: largest of W_max, max dedicated load, ceil(total / m) and 1.
// hi: makespan of a longest-processing-time-first greedy assignment.
SearchBounds initial_bounds(const Instance &instance);

// Validates (throwing InputError) and searches.
Solution solve(const Instance &instance, ModeHint mode, const std::optional<Rational> &beta, const CoreHooks &hooks = {});

nlohmann::ordered_json solution_to_json(const Solution &solution, const Instance &instance);

} // namespace gbl

/*******************************************************************************
 * @file:   search_driver.cc
 ******************************************************************************/
#include "gbl/search_driver.h"

#include <algorithm>
#include <numeric>

#include "gbl/general_core.h"
#include "gbl/matching_core.h"
#include "gbl/relief_core.h"
#include "gbl/two_valued_core.h"

namespace gbl {

const char *to_string(CoreKind kind) {
  switch (kind) {
  case CoreKind::kReduction:
    return "reduction";
  case CoreKind::kMatching:
    return "matching";
  case CoreKind::kTwoValued:
    return "two_valued";
  case CoreKind::kTwoValuedImproved:
    return "two_valued_improved";
  case CoreKind::kRelief:
    return "relief";
  case CoreKind::kGeneral:
    return "general";
  }
  return "reduction";
}

GuessOutcome run_guess(const Instance &instance, const ValidationReport &report, Weight t, const CoreHooks &hooks) {
  ReduceResult reduced = reduce(instance, t, report.mode, report.beta);
  if (auto *declaration = std::get_if<Declaration>(&reduced)) {
    return GuessOutcome{CoreKind::kReduction, CoreOutcome{*declaration, 0}};
  }
  const GuessContext &ctx = std::get<GuessContext>(reduced);
  if (hooks.trace != nullptr) {
    for (const ReductionStep &step : ctx.log) {
      nlohmann::ordered_json line;
      line["core"] = "reduce";
      line["t"] = t;
      line["event"] = to_string(step.kind);
      line["weight"] = step.weight;
      hooks.trace->emit(line);
    }
  }

  if (report.mode == SolveMode::kGeneral) {
    return GuessOutcome{CoreKind::kGeneral, run_core_general(instance, ctx, *report.beta, hooks)};
  }
  const Weight heavy = report.heavy_weight;
  const Weight light = report.light_weight;
  if (t < 2 * light) {
    return GuessOutcome{CoreKind::kMatching, solve_unit_capacity(instance, ctx)};
  }
  if (t < 2 * heavy) {
    const bool improved = heavy >= 2 * light;
    const Thresholds2V th = Thresholds2V::make(
        improved ? ThresholdVariant::kImproved : ThresholdVariant::kStandard, t, heavy, light
    );
    return GuessOutcome{
        improved ? CoreKind::kTwoValuedImproved : CoreKind::kTwoValued, run_core_two_valued(instance, ctx, th, hooks)
    };
  }
  return GuessOutcome{CoreKind::kRelief, run_preflow_core(instance, ctx)};
}

Rational certified_ratio_bound(SolveMode mode, const std::optional<Rational> &beta, Weight heavy, Weight light) {
  if (mode == SolveMode::kGeneral) {
    return Rational(5, 3) + beta.value() * Rational(1, 3);
  }
  if (heavy >= 2 * light) {
    return Rational(1) + Rational(heavy / 2, heavy);
  }
  return Rational(3, 2);
}

SearchBounds initial_bounds(const Instance &instance) {
  SearchBounds bounds;
  const std::vector<Weight> folded = instance.folded_dedicated_loads();
  const Weight total = instance.total_load();
  const auto m = static_cast<Weight>(std::max<std::size_t>(instance.machines.size(), 1));
  bounds.lo = std::max<Weight>({1, instance.max_job_weight(), (total + m - 1) / m});
  for (const Weight d : folded) {
    bounds.lo = std::max(bounds.lo, d);
  }

  std::vector<JobIndex> order(instance.jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](JobIndex a, JobIndex b) {
    return instance.jobs[a].weight > instance.jobs[b].weight;
  });
  std::vector<Weight> loads(instance.machines.size());
  for (MachineIndex v = 0; v < loads.size(); ++v) {
    loads[v] = instance.machines[v].dedicated_load;
  }
  for (const JobIndex j : order) {
    const JobSpec &job = instance.jobs[j];
    MachineIndex best = job.eligible.front();
    for (const MachineIndex v : job.eligible) {
      if (loads[v] < loads[best] || (loads[v] == loads[best] && v < best)) {
        best = v;
      }
    }
    loads[best] += job.weight;
  }
  const Weight greedy = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  bounds.hi = std::max(bounds.lo, greedy);
  return bounds;
}

Solution solve(const Instance &instance, ModeHint mode, const std::optional<Rational> &beta, const CoreHooks &hooks) {
  const ValidationReport report = require_valid(instance, mode, beta);
  Solution solution;
  solution.mode = report.mode;
  solution.beta = report.beta;

  const SearchBounds bounds = initial_bounds(instance);
  Weight lo = bounds.lo;
  Weight hi = bounds.hi;
  std::optional<CoreSolution> best;

  auto attempt = [&](Weight t) -> bool {
    GuessOutcome guess = run_guess(instance, report, t, hooks);
    ++solution.stats.core_invocations;
    solution.stats.pushes += guess.outcome.pushes;
    solution.stats.guesses.push_back(t);
    if (auto *accepted = std::get_if<CoreSolution>(&guess.outcome.result)) {
      best = std::move(*accepted);
      return true;
    }
    solution.declarations.push_back(std::get<Declaration>(guess.outcome.result));
    return false;
  };

  while (lo < hi) {
    const Weight mid = lo + (hi - lo) / 2;
    if (attempt(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (!best) {
    if (!attempt(hi)) {
      throw InvariantViolation(
          "core declared OPT >= " + std::to_string(hi + 1) + " although a greedy assignment of makespan " +
          std::to_string(hi) + " exists"
      );
    }
  }

  solution.assignment = std::move(best->assignment);
  solution.makespan = best->makespan;
  solution.t_star = hi;
  solution.lower_bound = lo;
  solution.ratio_certified = Rational(solution.makespan, solution.lower_bound);

  const Rational bound =
      certified_ratio_bound(report.mode, report.beta, report.heavy_weight, report.light_weight) * Rational(hi);
  if (Rational(solution.makespan) > bound) {
    throw InvariantViolation("solution makespan exceeds the certified ratio times t_star");
  }
  return solution;
}

nlohmann::ordered_json solution_to_json(const Solution &solution, const Instance &instance) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (JobIndex j = 0; j < solution.assignment.size(); ++j) {
    assignment[instance.jobs[j].id] = instance.machines[solution.assignment[j]].id;
  }
  out["assignment"] = assignment;
  out["makespan"] = solution.makespan;
  out["t_star"] = solution.t_star;
  out["lower_bound"] = solution.lower_bound;
  out["ratio_certified"] = solution.ratio_certified.to_string();
  out["mode"] = to_string(solution.mode);
  if (solution.beta) {
    out["beta"] = solution.beta->to_string();
  }
  out["core_invocations"] = solution.stats.core_invocations;
  out["pushes"] = solution.stats.pushes;
  nlohmann::ordered_json declarations = nlohmann::ordered_json::array();
  for (const Declaration &declaration : solution.declarations) {
    declarations.push_back(declaration_to_json(declaration, instance));
  }
  out["declarations"] = declarations;
  return out;
}

} // namespace gbl

/*******************************************************************************
 * @file:   oracle.cc
 ******************************************************************************/
#include "gbl/oracle.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "gbl/preprocess.h"

namespace gbl {

const char *to_string(Verdict verdict) {
  switch (verdict) {
  case Verdict::kConfirmed:
    return "confirmed";
  case Verdict::kRefuted:
    return "refuted";
  case Verdict::kNeedsExhaustive:
    return "needs_exhaustive";
  }
  return "refuted";
}

//
// Branch and bound
//

namespace {
class Search {
public:
  Search(const Instance &instance, const OracleBudget &budget)
      : _instance(instance),
        _budget(budget),
        _start(std::chrono::steady_clock::now()),
        _loads(instance.folded_dedicated_loads()) {
    for (JobIndex j = 0; j < instance.jobs.size(); ++j) {
      if (instance.jobs[j].eligible.size() >= 2) {
        _order.push_back(j);
      }
    }
    if (_order.size() > budget.max_jobs) {
      throw BudgetExceeded(
          "oracle limited to " + std::to_string(budget.max_jobs) + " assignable jobs, instance has " +
          std::to_string(_order.size())
      );
    }
    std::stable_sort(_order.begin(), _order.end(), [&](JobIndex a, JobIndex b) {
      return instance.jobs[a].weight > instance.jobs[b].weight;
    });
    _suffix.assign(_order.size() + 1, 0);
    for (std::size_t k = _order.size(); k-- > 0;) {
      _suffix[k] = _suffix[k + 1] + instance.jobs[_order[k]].weight;
    }
  }

  // Smallest makespan strictly below `limit`, or `limit` if none exists.
  Weight minimise(Weight limit) {
    _best = limit;
    _stop_at = 0;
    descend(0);
    return _best;
  }

  // Whether some assignment reaches makespan <= t.
  bool reaches(Weight t) {
    _best = t + 1;
    _stop_at = t;
    descend(0);
    return _best <= t;
  }

  [[nodiscard]] Weight base_max() const {
    return _loads.empty() ? 0 : *std::max_element(_loads.begin(), _loads.end());
  }

private:
  void tick() {
    if ((++_nodes & 0xFFF) == 0 && std::chrono::steady_clock::now() - _start > _budget.wall) {
      throw BudgetExceeded("oracle exceeded its wall-clock budget");
    }
  }

  void descend(std::size_t k) {
    tick();
    const Weight current = base_max();
    if (current >= _best) {
      return;
    }
    if (k == _order.size()) {
      _best = current;
      return;
    }
    const Weight placed = std::accumulate(_loads.begin(), _loads.end(), Weight{0});
    const auto m = static_cast<Weight>(_loads.size());
    if ((placed + _suffix[k] + m - 1) / m >= _best) {
      return;
    }
    const JobSpec &job = _instance.jobs[_order[k]];
    for (const MachineIndex v : job.eligible) {
      if (_loads[v] + job.weight >= _best) {
        continue;
      }
      _loads[v] += job.weight;
      descend(k + 1);
      _loads[v] -= job.weight;
      if (_best <= _stop_at) {
        return;
      }
    }
  }

  const Instance &_instance;
  OracleBudget _budget;
  std::chrono::steady_clock::time_point _start;
  std::vector<Weight> _loads;
  std::vector<JobIndex> _order;
  std::vector<Weight> _suffix;
  Weight _best = 0;
  Weight _stop_at = 0;
  std::size_t _nodes = 0;
};
} // namespace

Weight exact_opt(const Instance &instance, const OracleBudget &budget) {
  Search search(instance, budget);
  Weight limit = instance.total_load() + 1;
  return search.minimise(limit);
}

bool feasible_at(const Instance &instance, Weight t, const OracleBudget &budget) {
  Search search(instance, budget);
  if (search.base_max() > t) {
    return false;
  }
  return search.reaches(t);
}

//
// Solutions
//

SolutionCheck verify_solution(const Instance &instance, const JobAssignment &assignment) {
  SolutionCheck check;
  if (assignment.size() != instance.jobs.size()) {
    check.reason = "assignment covers " + std::to_string(assignment.size()) + " of " +
                   std::to_string(instance.jobs.size()) + " jobs";
    return check;
  }
  std::vector<Weight> loads(instance.machines.size(), 0);
  for (MachineIndex v = 0; v < loads.size(); ++v) {
    loads[v] = instance.machines[v].dedicated_load;
  }
  for (JobIndex j = 0; j < assignment.size(); ++j) {
    const JobSpec &job = instance.jobs[j];
    if (std::find(job.eligible.begin(), job.eligible.end(), assignment[j]) == job.eligible.end()) {
      check.reason = "job '" + job.id + "' is assigned to an ineligible machine";
      return check;
    }
    loads[assignment[j]] += job.weight;
  }
  check.valid = true;
  check.makespan = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  return check;
}

//
// Certificates
//

namespace {
CertificateCheck confirmed(std::string reason) {
  return {Verdict::kConfirmed, std::move(reason)};
}

CertificateCheck refuted(std::string reason) {
  return {Verdict::kRefuted, std::move(reason)};
}

bool all_distinct(std::vector<std::size_t> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

std::optional<Rational> declaration_beta(const Declaration &declaration, const std::optional<Rational> &beta) {
  return declaration.beta ? declaration.beta : beta;
}

// Re-derives the reduced context the declaration was made against.
std::optional<GuessContext> rederive(
    const Instance &instance,
    const Declaration &declaration,
    const std::optional<Rational> &beta,
    std::string &why
) {
  if (declaration.mode == SolveMode::kGeneral && !beta) {
    why = "general-mode declaration without beta";
    return std::nullopt;
  }
  ReduceResult reduced = reduce(instance, declaration.t, declaration.mode, beta);
  if (std::holds_alternative<Declaration>(reduced)) {
    why = "reductions at t already declare a different witness";
    return std::nullopt;
  }
  return std::get<GuessContext>(std::move(reduced));
}

std::set<JobIndex> movable_jobs(const GuessContext &ctx) {
  std::set<JobIndex> out;
  for (const Pebble &pebble : ctx.pebbles) {
    if (pebble.job) {
      out.insert(*pebble.job);
    }
  }
  for (const Rock &rock : ctx.rocks.edges()) {
    out.insert(rock.job);
  }
  return out;
}

CertificateCheck check_overflow(
    const Instance &instance,
    const Declaration &declaration,
    const OverflowWitness &witness,
    const std::optional<Rational> &beta
) {
  if (witness.machine >= instance.machines.size()) {
    return refuted("machine out of range");
  }
  if (!witness.after_reduction) {
    const Weight load = instance.folded_dedicated_loads()[witness.machine];
    if (load != witness.load) {
      return refuted("dedicated load recount differs from the payload");
    }
    return load > declaration.t ? confirmed("dedicated load exceeds t") : refuted("dedicated load fits within t");
  }
  if (declaration.mode == SolveMode::kGeneral && !beta) {
    return refuted("general-mode declaration without beta");
  }
  const ReduceResult reduced = reduce(instance, declaration.t, declaration.mode, beta);
  const auto *again = std::get_if<Declaration>(&reduced);
  if (again == nullptr || again->payload != declaration.payload) {
    return refuted("reductions do not reproduce the overflow");
  }
  return witness.load > declaration.t ? confirmed("reduced dedicated load exceeds t")
                                      : refuted("reduced dedicated load fits within t");
}

CertificateCheck check_multi_cycle(const Instance &instance, const Declaration &declaration, const MultiCycleWitness &w) {
  if (!all_distinct(w.nodes) || !all_distinct(w.rocks)) {
    return refuted("repeated node or rock");
  }
  const std::set<MachineIndex> nodes(w.nodes.begin(), w.nodes.end());
  for (const JobIndex j : w.rocks) {
    const JobSpec &job = instance.jobs.at(j);
    if (job.eligible.size() != 2) {
      return refuted("rock '" + job.id + "' does not have exactly two machines");
    }
    if (2 * job.weight <= declaration.t) {
      return refuted("rock '" + job.id + "' is light enough to share a machine");
    }
    for (const MachineIndex v : job.eligible) {
      if (nodes.count(v) == 0) {
        return refuted("rock '" + job.id + "' leaves the node set");
      }
    }
  }
  return w.rocks.size() > w.nodes.size() ? confirmed("more rocks than machines to hold them")
                                         : refuted("rock count does not exceed node count");
}

CertificateCheck check_hall(
    const Instance &instance,
    const Declaration &declaration,
    const HallWitness &w,
    const std::optional<Rational> &beta
) {
  std::string why;
  const auto ctx = rederive(instance, declaration, beta, why);
  if (!ctx) {
    return refuted(why);
  }
  if (ctx->dl != w.dl) {
    return refuted("dedicated-load snapshot differs from the reductions");
  }
  std::vector<Weight> weights;
  for (const Pebble &pebble : ctx->pebbles) {
    weights.push_back(pebble.weight);
  }
  for (const Rock &rock : ctx->rocks.edges()) {
    weights.push_back(rock.weight);
  }
  std::sort(weights.begin(), weights.end());
  if (weights.size() >= 2 && weights[0] + weights[1] <= declaration.t) {
    return refuted("two jobs fit on one machine, so matching is not exact at t");
  }
  if (!all_distinct(w.jobs)) {
    return refuted("repeated job");
  }
  const std::set<JobIndex> movable = movable_jobs(*ctx);
  std::set<MachineIndex> neighborhood;
  for (const JobIndex j : w.jobs) {
    if (movable.count(j) == 0) {
      return refuted("job '" + instance.jobs.at(j).id + "' is not movable at t");
    }
    const JobSpec &job = instance.jobs[j];
    for (const MachineIndex v : job.eligible) {
      if (ctx->dl[v] + job.weight <= declaration.t) {
        neighborhood.insert(v);
      }
    }
  }
  return neighborhood.size() < w.jobs.size() ? confirmed("fitting neighbourhood smaller than the job set")
                                             : refuted("fitting neighbourhood is large enough");
}

CertificateCheck check_preflow(
    const Instance &instance,
    const Declaration &declaration,
    const PreflowWitness &w,
    const std::optional<Rational> &beta
) {
  std::string why;
  const auto ctx = rederive(instance, declaration, beta, why);
  if (!ctx) {
    return refuted(why);
  }
  if (ctx->dl != w.dl) {
    return refuted("dedicated-load snapshot differs from the reductions");
  }
  if (!all_distinct(w.cut) || !all_distinct(w.captive)) {
    return refuted("repeated machine or job");
  }
  const std::set<MachineIndex> cut(w.cut.begin(), w.cut.end());
  const std::set<JobIndex> movable = movable_jobs(*ctx);
  Int128 inside = 0;
  for (const MachineIndex v : w.cut) {
    inside += ctx->dl.at(v);
  }
  for (const JobIndex j : w.captive) {
    if (movable.count(j) == 0) {
      return refuted("captive job '" + instance.jobs.at(j).id + "' is not movable at t");
    }
    for (const MachineIndex v : instance.jobs[j].eligible) {
      if (cut.count(v) == 0) {
        return refuted("captive job '" + instance.jobs[j].id + "' can leave the cut");
      }
    }
    inside += instance.jobs[j].weight;
  }
  const Int128 capacity = static_cast<Int128>(cut.size()) * declaration.t;
  return inside > capacity ? confirmed("captive load exceeds the cut's capacity")
                           : refuted("captive load fits in the cut");
}

CertificateCheck check_activated(
    const Instance &instance,
    const Declaration &declaration,
    const ActivatedSetWitness &w,
    const std::optional<Rational> &beta
) {
  std::string why;
  const auto ctx = rederive(instance, declaration, beta, why);
  if (!ctx) {
    return refuted(why);
  }
  if (ctx->dl != w.dl) {
    return refuted("dedicated-load snapshot differs from the reductions");
  }
  if (w.pl.size() != ctx->machine_count()) {
    return refuted("pebble-load snapshot has the wrong size");
  }

  // The payload's pebbles must be exactly the context's pebbles.
  using Key = std::tuple<std::optional<JobIndex>, std::optional<std::pair<JobIndex, JobIndex>>, Weight,
                         std::vector<MachineIndex>>;
  std::vector<Key> expected;
  std::vector<Key> given;
  for (const Pebble &pebble : ctx->pebbles) {
    expected.emplace_back(pebble.job, pebble.pair, pebble.weight, pebble.eligible);
  }
  std::vector<Weight> pl(ctx->machine_count(), 0);
  for (const PlacedPebble &pebble : w.pebbles) {
    std::vector<MachineIndex> eligible = pebble.eligible;
    std::sort(eligible.begin(), eligible.end());
    given.emplace_back(pebble.job, pebble.pair, pebble.weight, eligible);
    if (!std::binary_search(eligible.begin(), eligible.end(), pebble.at)) {
      return refuted("a pebble sits on an ineligible machine");
    }
    pl.at(pebble.at) += pebble.weight;
  }
  std::sort(expected.begin(), expected.end());
  std::sort(given.begin(), given.end());
  if (expected != given) {
    return refuted("pebble list differs from the reductions");
  }
  if (pl != w.pl) {
    return refuted("pebble-load snapshot disagrees with the placement");
  }

  if (w.activated.empty() || !all_distinct(w.activated)) {
    return refuted("activated set empty or repeated");
  }
  std::vector<bool> in_a(ctx->machine_count(), false);
  for (const MachineIndex v : w.activated) {
    if (v >= ctx->machine_count()) {
      return refuted("activated machine out of range");
    }
    in_a[v] = true;
  }
  for (const PlacedPebble &pebble : w.pebbles) {
    if (!in_a[pebble.at]) {
      continue;
    }
    for (const MachineIndex v : pebble.eligible) {
      if (!in_a[v]) {
        return refuted("a pebble in the activated set can leave it");
      }
    }
  }

  const RockLoad rocks = min_rock_load_into(ctx->rocks, in_a);
  const std::optional<Weight> recorded = rocks.reachable ? std::optional<Weight>(rocks.value) : std::nullopt;
  if (recorded != w.min_rock_load) {
    return refuted("minimum rock load into the activated set recounts differently");
  }
  if (!rocks.reachable) {
    return confirmed("no orientation gives every machine at most one rock");
  }
  Int128 total = rocks.value;
  for (const MachineIndex v : w.activated) {
    total += ctx->dl[v] + pl[v];
  }
  const Int128 capacity = static_cast<Int128>(w.activated.size()) * declaration.t;
  if (total > capacity) {
    return confirmed("activated load exceeds the activated capacity");
  }
  if (w.mode == SolveMode::kTwoValued) {
    return {Verdict::kNeedsExhaustive, "aggregate inequality does not hold; per-system argument not checked"};
  }
  return refuted("aggregate inequality does not hold");
}
} // namespace

CertificateCheck verify_certificate(
    const Instance &instance,
    const Declaration &declaration,
    const std::optional<Rational> &beta
) {
  const std::optional<Rational> b = declaration_beta(declaration, beta);
  try {
    return std::visit(
        [&](const auto &witness) -> CertificateCheck {
          using T = std::decay_t<decltype(witness)>;
          if constexpr (std::is_same_v<T, OverflowWitness>) {
            return check_overflow(instance, declaration, witness, b);
          } else if constexpr (std::is_same_v<T, MultiCycleWitness>) {
            return check_multi_cycle(instance, declaration, witness);
          } else if constexpr (std::is_same_v<T, HallWitness>) {
            return check_hall(instance, declaration, witness, b);
          } else if constexpr (std::is_same_v<T, ActivatedSetWitness>) {
            return check_activated(instance, declaration, witness, b);
          } else {
            return check_preflow(instance, declaration, witness, b);
          }
        },
        declaration.payload
    );
  } catch (const std::out_of_range &) {
    return refuted("payload references an index out of range");
  } catch (const InputError &error) {
    return refuted(error.what());
  }
}

bool confirm_declaration(
    const Instance &instance,
    const Declaration &declaration,
    const std::optional<Rational> &beta,
    const OracleBudget &budget
) {
  const CertificateCheck check = verify_certificate(instance, declaration, beta);
  switch (check.verdict) {
  case Verdict::kConfirmed:
    return true;
  case Verdict::kRefuted:
    return false;
  case Verdict::kNeedsExhaustive:
    return !feasible_at(instance, declaration.t, budget);
  }
  return false;
}

} // namespace gbl

/*******************************************************************************
 * @file:   preprocess.cc
 ******************************************************************************/
#include "gbl/preprocess.h"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace gbl {

const char *to_string(ReductionStep::Kind kind) {
  switch (kind) {
  case ReductionStep::Kind::kFoldSingle:
    return "fold_single";
  case ReductionStep::Kind::kFoldPendant:
    return "fold_pendant";
  case ReductionStep::Kind::kMergeParallel:
    return "merge_parallel";
  case ReductionStep::Kind::kDropEmptyPebble:
    return "drop_empty_pebble";
  }
  return "fold_single";
}

namespace {
Weight multi_machine_max(const Instance &instance) {
  Weight best = 0;
  for (const JobSpec &job : instance.jobs) {
    if (job.eligible.size() >= 2) {
      best = std::max(best, job.weight);
    }
  }
  return best;
}

std::optional<Declaration> overflow(const GuessContext &ctx, bool after_reduction) {
  for (MachineIndex m = 0; m < ctx.dl.size(); ++m) {
    if (ctx.dl[m] > ctx.t) {
      return Declaration{ctx.t, ctx.mode, ctx.beta, OverflowWitness{m, ctx.dl[m], after_reduction}};
    }
  }
  return std::nullopt;
}

// Removes the trees hanging off the cycle of a one-cycle system; every
// pendant rock must point away from the cycle, so it joins its leaf's load.
bool fold_pendant_trees(GuessContext &ctx, const RockGraph &graph, const System &system, std::vector<bool> &removed) {
  std::vector<std::size_t> degree(graph.node_count(), 0);
  std::vector<MachineIndex> leaves;
  for (const MachineIndex v : system.nodes) {
    degree[v] = graph.incident(v).size();
    if (degree[v] == 1) {
      leaves.push_back(v);
    }
  }
  std::sort(leaves.rbegin(), leaves.rend());
  bool changed = false;
  while (!leaves.empty()) {
    const MachineIndex leaf = leaves.back();
    leaves.pop_back();
    for (const Incidence &inc : graph.incident(leaf)) {
      if (removed[inc.edge]) {
        continue;
      }
      const Rock &rock = graph.edge(inc.edge);
      removed[inc.edge] = true;
      ctx.dl[leaf] += rock.weight;
      ctx.forced[rock.job] = leaf;
      ctx.log.push_back({ReductionStep::Kind::kFoldPendant, {rock.job}, {leaf}, rock.weight});
      changed = true;
      if (--degree[inc.other] == 1) {
        leaves.push_back(inc.other);
      }
      break;
    }
  }
  return changed;
}

void merge_parallel_pair(GuessContext &ctx, const RockGraph &graph, const System &system, std::vector<bool> &removed) {
  const Rock &first = graph.edge(system.edges[0]);
  const Rock &second = graph.edge(system.edges[1]);
  const bool first_heavier = first.weight > second.weight || (first.weight == second.weight && first.job < second.job);
  const Rock &heavy = first_heavier ? first : second;
  const Rock &light = first_heavier ? second : first;

  ctx.dl[heavy.a] += light.weight;
  ctx.dl[heavy.b] += light.weight;
  removed[system.edges[0]] = true;
  removed[system.edges[1]] = true;

  const Weight rest = heavy.weight - light.weight;
  if (rest > 0) {
    Pebble pebble;
    pebble.weight = rest;
    pebble.eligible = {heavy.a, heavy.b};
    pebble.pair = std::make_pair(heavy.job, light.job);
    ctx.pebbles.push_back(std::move(pebble));
    ctx.log.push_back({ReductionStep::Kind::kMergeParallel, {heavy.job, light.job}, {heavy.a, heavy.b}, rest});
  } else {
    ctx.forced[heavy.job] = heavy.a;
    ctx.forced[light.job] = heavy.b;
    ctx.log.push_back({ReductionStep::Kind::kDropEmptyPebble, {heavy.job, light.job}, {heavy.a, heavy.b}, 0});
  }
}
} // namespace

bool is_rock_weight(Weight w, Weight t, SolveMode mode, const std::optional<Rational> &beta, Weight heavy_weight) {
  if (mode == SolveMode::kTwoValued) {
    return w == heavy_weight && 2 * w > t;
  }
  if (!beta) {
    throw InputError("general mode requires beta");
  }
  return AffineBound{*beta, t, 0}.exceeded_by(w);
}

JobClasses classify_jobs(const Instance &instance, Weight t, SolveMode mode, const std::optional<Rational> &beta) {
  const Weight heavy = multi_machine_max(instance);
  JobClasses classes;
  for (JobIndex j = 0; j < instance.jobs.size(); ++j) {
    const JobSpec &job = instance.jobs[j];
    if (job.eligible.size() < 2) {
      continue;
    }
    if (is_rock_weight(job.weight, t, mode, beta, heavy)) {
      if (job.eligible.size() > 2) {
        throw InputError(
            "job '" + job.id + "' is heavy at t=" + std::to_string(t) + " but has " +
            std::to_string(job.eligible.size()) + " eligible machines"
        );
      }
      classes.rocks.push_back(j);
    } else {
      classes.pebbles.push_back(j);
    }
  }
  return classes;
}

ReduceResult reduce(const Instance &instance, Weight t, SolveMode mode, const std::optional<Rational> &beta) {
  GuessContext ctx;
  ctx.t = t;
  ctx.mode = mode;
  ctx.beta = beta;
  ctx.forced.assign(instance.jobs.size(), std::nullopt);
  ctx.dl.resize(instance.machines.size());
  for (MachineIndex m = 0; m < instance.machines.size(); ++m) {
    ctx.dl[m] = instance.machines[m].dedicated_load;
  }

  for (JobIndex j = 0; j < instance.jobs.size(); ++j) {
    const JobSpec &job = instance.jobs[j];
    if (job.eligible.size() == 1) {
      ctx.dl[job.eligible.front()] += job.weight;
      ctx.forced[j] = job.eligible.front();
      ctx.log.push_back({ReductionStep::Kind::kFoldSingle, {j}, {job.eligible.front()}, job.weight});
    }
  }
  if (auto declared = overflow(ctx, false)) {
    return *declared;
  }

  const JobClasses classes = classify_jobs(instance, t, mode, beta);
  for (const JobIndex j : classes.pebbles) {
    Pebble pebble;
    pebble.weight = instance.jobs[j].weight;
    pebble.eligible = instance.jobs[j].eligible;
    std::sort(pebble.eligible.begin(), pebble.eligible.end());
    pebble.job = j;
    ctx.pebbles.push_back(std::move(pebble));
  }
  std::vector<Rock> rocks;
  for (const JobIndex j : classes.rocks) {
    const JobSpec &job = instance.jobs[j];
    const MachineIndex a = std::min(job.eligible[0], job.eligible[1]);
    const MachineIndex b = std::max(job.eligible[0], job.eligible[1]);
    rocks.push_back(Rock{j, a, b, job.weight});
  }

  for (;;) {
    const RockGraph graph(instance.machines.size(), rocks);
    for (const System &system : graph.systems()) {
      if (system.kind == SystemKind::kMultiCycle) {
        MultiCycleWitness witness;
        witness.nodes = system.nodes;
        for (const std::size_t e : system.edges) {
          witness.rocks.push_back(graph.edge(e).job);
        }
        return Declaration{t, mode, beta, witness};
      }
    }

    std::vector<bool> removed(graph.edge_count(), false);
    bool changed = false;
    for (const System &system : graph.systems()) {
      if (system.kind == SystemKind::kUnicyclic) {
        changed = fold_pendant_trees(ctx, graph, system, removed) || changed;
      }
    }
    if (!changed) {
      for (const System &system : graph.systems()) {
        if (system.kind == SystemKind::kCycle && system.nodes.size() == 2) {
          merge_parallel_pair(ctx, graph, system, removed);
          changed = true;
        }
      }
    }
    if (!changed) {
      ctx.rocks = graph;
      return ctx;
    }
    if (auto declared = overflow(ctx, true)) {
      return *declared;
    }
    std::vector<Rock> kept;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      if (!removed[e]) {
        kept.push_back(graph.edge(e));
      }
    }
    rocks = std::move(kept);
  }
}

Instance to_instance(const GuessContext &ctx, const Instance &original) {
  Instance out;
  out.mode_hint = original.mode_hint;
  for (MachineIndex m = 0; m < ctx.dl.size(); ++m) {
    out.machines.push_back(MachineSpec{original.machines[m].id, ctx.dl[m]});
  }
  for (const Pebble &pebble : ctx.pebbles) {
    std::string id;
    if (pebble.job) {
      id = original.jobs[*pebble.job].id;
    } else {
      id = original.jobs[pebble.pair->first].id + "+" + original.jobs[pebble.pair->second].id;
    }
    out.jobs.push_back(JobSpec{id, pebble.weight, pebble.eligible});
  }
  for (const Rock &rock : ctx.rocks.edges()) {
    out.jobs.push_back(JobSpec{original.jobs[rock.job].id, rock.weight, {rock.a, rock.b}});
  }
  return out;
}

JobAssignment assemble_assignment(
    const GuessContext &ctx,
    std::size_t job_count,
    const std::vector<MachineIndex> &pebble_at,
    const std::vector<MachineIndex> &rock_head
) {
  if (job_count != ctx.forced.size()) {
    throw std::invalid_argument("job count does not match the reduced context");
  }
  constexpr MachineIndex kUnset = static_cast<MachineIndex>(-1);
  JobAssignment assignment(job_count, kUnset);
  for (JobIndex j = 0; j < job_count; ++j) {
    if (ctx.forced[j]) {
      assignment[j] = *ctx.forced[j];
    }
  }
  for (std::size_t p = 0; p < ctx.pebbles.size(); ++p) {
    const Pebble &pebble = ctx.pebbles[p];
    const MachineIndex at = pebble_at.at(p);
    if (pebble.job) {
      assignment[*pebble.job] = at;
    } else {
      const MachineIndex other = pebble.eligible[0] == at ? pebble.eligible[1] : pebble.eligible[0];
      assignment[pebble.pair->first] = at;
      assignment[pebble.pair->second] = other;
    }
  }
  for (std::size_t e = 0; e < ctx.rocks.edge_count(); ++e) {
    assignment[ctx.rocks.edge(e).job] = rock_head.at(e);
  }
  if (std::find(assignment.begin(), assignment.end(), kUnset) != assignment.end()) {
    throw InvariantViolation("assembled assignment leaves a job unassigned");
  }
  return assignment;
}

std::vector<Weight> machine_loads(const Instance &instance, const JobAssignment &assignment) {
  std::vector<Weight> loads(instance.machines.size(), 0);
  for (MachineIndex m = 0; m < instance.machines.size(); ++m) {
    loads[m] = instance.machines[m].dedicated_load;
  }
  for (JobIndex j = 0; j < assignment.size(); ++j) {
    loads.at(assignment[j]) += instance.jobs[j].weight;
  }
  return loads;
}

std::string reduction_log_json_lines(const GuessContext &ctx, const Instance &instance) {
  std::string out;
  for (const ReductionStep &step : ctx.log) {
    nlohmann::ordered_json line;
    line["t"] = ctx.t;
    line["step"] = to_string(step.kind);
    line["jobs"] = nlohmann::json::array();
    for (const JobIndex j : step.jobs) {
      line["jobs"].push_back(instance.jobs[j].id);
    }
    line["machines"] = nlohmann::json::array();
    for (const MachineIndex m : step.machines) {
      line["machines"].push_back(instance.machines[m].id);
    }
    line["weight"] = step.weight;
    out += line.dump() + "\n";
  }
  return out;
}

} // namespace gbl

/*******************************************************************************
 * @file:   two_valued_core.cc
 ******************************************************************************/
#include "gbl/two_valued_core.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace gbl {

const char *to_string(NodeClass c) {
  switch (c) {
  case NodeClass::kUncritical:
    return "uncritical";
  case NodeClass::kMiddle:
    return "middle";
  case NodeClass::kCritical:
    return "critical";
  case NodeClass::kHypercritical:
    return "hypercritical";
  }
  return "middle";
}

const char *to_string(SystemStatus s) {
  return s == SystemStatus::kGood ? "good" : "bad";
}

Thresholds2V Thresholds2V::make(ThresholdVariant variant, Weight t, Weight heavy, Weight light) {
  Thresholds2V th;
  th.variant = variant;
  if (variant == ThresholdVariant::kStandard) {
    const Rational three_halves(3, 2);
    th.uncritical_max = {three_halves, t, -heavy - light};
    th.critical_min_exclusive = {three_halves, t, -heavy};
    th.hyper_min_exclusive = {three_halves, t, 0};
    th.makespan_bound = {three_halves, t, 0};
  } else {
    if (heavy < 2 * light) {
      throw std::invalid_argument("improved thresholds need W >= 2w");
    }
    const Weight half = heavy / 2;
    th.uncritical_max = {Rational(1), t, half - heavy - light};
    th.critical_min_exclusive = {Rational(1), t, half - heavy};
    th.hyper_min_exclusive = {Rational(1), t, half};
    th.makespan_bound = {Rational(1), t, half};
  }
  return th;
}

NodeClass classify_load(Weight load, const Thresholds2V &th) {
  if (th.hyper_min_exclusive.exceeded_by(load)) {
    return NodeClass::kHypercritical;
  }
  if (th.critical_min_exclusive.exceeded_by(load)) {
    return NodeClass::kCritical;
  }
  if (th.uncritical_max.admits(load)) {
    return NodeClass::kUncritical;
  }
  return NodeClass::kMiddle;
}

namespace {
bool is_critical(NodeClass c) {
  return c == NodeClass::kCritical || c == NodeClass::kHypercritical;
}
} // namespace

TwoValuedState::TwoValuedState(const GuessContext &ctx, Thresholds2V th)
    : TwoValuedState(ctx, th, initial_placement(ctx)) {}

TwoValuedState::TwoValuedState(const GuessContext &ctx, Thresholds2V th, std::vector<MachineIndex> placement)
    : _ctx(&ctx),
      _th(th),
      _at(std::move(placement)),
      _pl(pebble_loads(ctx, _at)),
      _levels(ctx.machine_count(), kUnreached) {}

NodeClass TwoValuedState::classify_node(MachineIndex v) const {
  return classify_load(load(v), _th);
}

SystemStatus TwoValuedState::system_status(std::size_t system) const {
  return system_status_with(system, 0, 0);
}

SystemStatus TwoValuedState::system_status_with(std::size_t system, MachineIndex v, Weight extra) const {
  const System &s = _ctx->rocks.systems()[system];
  std::size_t critical = 0;
  for (const MachineIndex u : s.nodes) {
    const NodeClass c = classify_load(load(u) + (u == v ? extra : 0), _th);
    if (c == NodeClass::kHypercritical) {
      return SystemStatus::kBad;
    }
    critical += is_critical(c) ? 1 : 0;
  }
  if ((s.kind == SystemKind::kTree && critical >= 2) || (s.kind == SystemKind::kCycle && critical >= 1)) {
    return SystemStatus::kBad;
  }
  return SystemStatus::kGood;
}

bool TwoValuedState::any_bad_system() const {
  for (std::size_t s = 0; s < _ctx->rocks.systems().size(); ++s) {
    if (system_status(s) == SystemStatus::kBad) {
      return true;
    }
  }
  return false;
}

void TwoValuedState::label_levels() {
  const RockGraph &graph = _ctx->rocks;
  const std::size_t n = _ctx->machine_count();
  std::vector<SystemStatus> status(graph.systems().size());
  for (std::size_t s = 0; s < status.size(); ++s) {
    status[s] = system_status(s);
  }
  std::vector<NodeClass> cls(n);
  for (MachineIndex v = 0; v < n; ++v) {
    cls[v] = classify_node(v);
  }

  _levels.assign(n, kUnreached);
  for (MachineIndex v = 0; v < n; ++v) {
    const bool bad = status[graph.system_of(v)] == SystemStatus::kBad;
    if (cls[v] == NodeClass::kHypercritical || (is_critical(cls[v]) && bad)) {
      _levels[v] = 0;
    }
  }

  for (Level round = 1;; ++round) {
    std::vector<bool> fresh(n, false);
    bool any = false;
    for (std::size_t p = 0; p < _at.size(); ++p) {
      if (_levels[_at[p]] == kUnreached) {
        continue;
      }
      for (const MachineIndex v : _ctx->pebbles[p].eligible) {
        if (_levels[v] == kUnreached && !fresh[v]) {
          fresh[v] = true;
          any = true;
        }
      }
    }
    if (!any) {
      break;
    }
    std::vector<bool> touched(graph.systems().size(), false);
    for (MachineIndex v = 0; v < n; ++v) {
      if (fresh[v]) {
        touched[graph.system_of(v)] = true;
      }
    }
    for (MachineIndex v = 0; v < n; ++v) {
      const std::size_t s = graph.system_of(v);
      const bool joins = fresh[v] ||
                         (_levels[v] == kUnreached && is_critical(cls[v]) && status[s] == SystemStatus::kGood && touched[s]);
      if (joins) {
        _levels[v] = round;
      }
    }
  }
}

std::vector<MachineIndex> TwoValuedState::activated() const {
  std::vector<MachineIndex> out;
  for (MachineIndex v = 0; v < _levels.size(); ++v) {
    if (_levels[v] != kUnreached) {
      out.push_back(v);
    }
  }
  return out;
}

std::int64_t TwoValuedState::potential() const {
  const auto n = static_cast<std::int64_t>(_ctx->machine_count());
  std::int64_t phi = 0;
  for (const MachineIndex v : _at) {
    if (_levels[v] != kUnreached) {
      phi += n - static_cast<std::int64_t>(_levels[v]);
    }
  }
  return phi;
}

bool TwoValuedState::push_allowed(const PushMove &move) const {
  if (move.pebble >= _at.size() || _at[move.pebble] != move.from || move.from == move.to) {
    return false;
  }
  const Pebble &pebble = _ctx->pebbles[move.pebble];
  if (!std::binary_search(pebble.eligible.begin(), pebble.eligible.end(), move.to)) {
    return false;
  }
  if (_levels[move.from] == kUnreached || _levels[move.to] != _levels[move.from] + 1) {
    return false;
  }
  if (classify_node(move.to) == NodeClass::kUncritical) {
    return true;
  }
  const std::size_t s = _ctx->rocks.system_of(move.to);
  return system_status(s) == SystemStatus::kGood &&
         system_status_with(s, move.to, pebble.weight) == SystemStatus::kGood;
}

std::optional<PushMove> TwoValuedState::find_push() const {
  std::optional<PushMove> best;
  auto key = [&](const PushMove &m) { return std::make_tuple(_levels[m.from], m.from, m.pebble, m.to); };
  for (std::size_t p = 0; p < _at.size(); ++p) {
    const MachineIndex from = _at[p];
    if (_levels[from] == kUnreached) {
      continue;
    }
    for (const MachineIndex to : _ctx->pebbles[p].eligible) {
      const PushMove move{p, from, to};
      if (push_allowed(move) && (!best || key(move) < key(*best))) {
        best = move;
      }
    }
  }
  return best;
}

PushRecord TwoValuedState::apply_push(const PushMove &move) {
  if (!push_allowed(move) || find_push() != move) {
    throw std::invalid_argument("stale or inadmissible push move");
  }
  PushRecord record;
  record.mode = SolveMode::kTwoValued;
  record.t = _ctx->t;
  record.pebble = move.pebble;
  record.from = move.from;
  record.to = move.to;
  record.levels_before = _levels;
  record.potential_before = potential();

  const Weight w = _ctx->pebbles[move.pebble].weight;
  _at[move.pebble] = move.to;
  _pl[move.from] -= w;
  _pl[move.to] += w;
  ++_pushes;
  label_levels();

  record.levels_after = _levels;
  record.potential_after = potential();
  if (record.potential_after >= record.potential_before) {
    throw InvariantViolation("two-valued push did not decrease the potential");
  }
  for (MachineIndex v = 0; v < _levels.size(); ++v) {
    if (record.levels_after[v] < record.levels_before[v]) {
      throw InvariantViolation("two-valued push lowered the level of a node");
    }
  }
  return record;
}

CoreOutcome run_core_two_valued(
    const Instance &instance,
    const GuessContext &ctx,
    const Thresholds2V &th,
    const CoreHooks &hooks
) {
  TwoValuedState state(ctx, th);
  state.label_levels();
  const std::size_t push_cap = ctx.machine_count() * ctx.pebbles.size();

  while (state.any_bad_system()) {
    const std::optional<PushMove> move = state.find_push();
    if (!move) {
      ActivatedSetWitness witness;
      witness.mode = SolveMode::kTwoValued;
      witness.activated = state.activated();
      std::vector<bool> mask(ctx.machine_count(), false);
      for (const MachineIndex v : witness.activated) {
        witness.levels.push_back(state.levels()[v]);
        mask[v] = true;
      }
      for (std::size_t s = 0; s < ctx.rocks.systems().size(); ++s) {
        witness.system_status.emplace_back(to_string(state.system_status(s)));
      }
      witness.dl = ctx.dl;
      witness.pl = state.pl();
      witness.pebbles = placed_pebbles(ctx, state.placement());
      const RockLoad rock_load = min_rock_load_into(ctx.rocks, mask);
      if (rock_load.reachable) {
        witness.min_rock_load = rock_load.value;
      }
      hooks.emit({{"core", "two_valued"}, {"t", ctx.t}, {"event", "declare"}, {"activated", witness.activated.size()}});
      return CoreOutcome{Declaration{ctx.t, ctx.mode, ctx.beta, witness}, state.push_count()};
    }
    const PushRecord record = state.apply_push(*move);
    hooks.emit(
        {{"core", "two_valued"},
         {"t", ctx.t},
         {"event", "push"},
         {"round", state.push_count()},
         {"pebble", move->pebble},
         {"from", instance.machines[move->from].id},
         {"to", instance.machines[move->to].id},
         {"potential", record.potential_after}}
    );
    if (hooks.on_push) {
      hooks.on_push(record);
    }
    if (state.push_count() > push_cap) {
      throw InvariantViolation("two-valued core exceeded |V|*|P| pushes");
    }
  }

  // Each good system: a tree keeps its single critical node (if any) as root.
  const RockGraph &graph = ctx.rocks;
  std::vector<std::optional<MachineIndex>> roots(graph.systems().size());
  for (std::size_t s = 0; s < graph.systems().size(); ++s) {
    for (const MachineIndex v : graph.systems()[s].nodes) {
      if (is_critical(state.classify_node(v))) {
        roots[s] = v;
        break;
      }
    }
  }
  const std::vector<MachineIndex> heads = orient_systems(graph, roots);
  CoreSolution solution = finish_solution(instance, ctx, state.placement(), heads);
  if (th.makespan_bound.exceeded_by(solution.makespan)) {
    throw InvariantViolation(
        "two-valued core produced makespan " + std::to_string(solution.makespan) + " above its bound at t=" +
        std::to_string(ctx.t)
    );
  }
  return CoreOutcome{std::move(solution), state.push_count()};
}

} // namespace gbl

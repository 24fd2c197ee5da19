/*******************************************************************************
 * @file:   general_core.cc
 ******************************************************************************/
#include "gbl/general_core.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace gbl {

ThresholdsG ThresholdsG::make(const Rational &beta, Weight t) {
  const Rational third(1, 3);
  ThresholdsG th;
  th.overload = {Rational(5, 3) + beta * third, t, 0};
  th.push = {Rational(5, 3) - Rational(2) * beta * third, t, 0};
  th.rule2 = {Rational(2, 3) + beta * third, t, 0};
  return th;
}

//
// OrientationState
//

OrientationState::OrientationState(const RockGraph &graph)
    : _graph(&graph),
      _dir(graph.edge_count(), EdgeDir::kNeutral),
      _rl(graph.node_count(), 0) {}

MachineIndex OrientationState::head(std::size_t e) const {
  const Rock &rock = _graph->edge(e);
  switch (_dir[e]) {
  case EdgeDir::kTowardA:
    return rock.a;
  case EdgeDir::kTowardB:
    return rock.b;
  default:
    throw std::logic_error("neutral edge has no head");
  }
}

void OrientationState::direct(std::size_t e, MachineIndex toward) {
  const Rock &rock = _graph->edge(e);
  if (_dir[e] != EdgeDir::kNeutral) {
    _rl[head(e)] -= rock.weight;
  }
  _dir[e] = toward == rock.a ? EdgeDir::kTowardA : EdgeDir::kTowardB;
  _rl[toward] += rock.weight;
}

void OrientationState::clear() {
  std::fill(_dir.begin(), _dir.end(), EdgeDir::kNeutral);
  std::fill(_rl.begin(), _rl.end(), 0);
}

//
// Explorer
//

Explorer::Explorer(const GuessContext &ctx, const ThresholdsG &th, std::vector<MachineIndex> placement)
    : _ctx(&ctx),
      _th(th),
      _at(std::move(placement)),
      _pl(pebble_loads(ctx, _at)),
      _orient(ctx.rocks),
      _levels(ctx.machine_count(), kUnreached),
      _conflict_round(ctx.machine_count(), kUnreached),
      _activation(ctx.machine_count(), Activation::kNone) {}

void Explorer::set_hooks(const CoreHooks *hooks, std::size_t iteration) {
  _hooks = hooks;
  _iteration = iteration;
}

void Explorer::trace(const char *event, MachineIndex v, std::optional<MachineIndex> u) const {
  if (_hooks == nullptr || _hooks->trace == nullptr) {
    return;
  }
  nlohmann::ordered_json line;
  line["core"] = "general";
  line["t"] = _ctx->t;
  line["iteration"] = _iteration;
  line["round"] = _round;
  line["event"] = event;
  line["node"] = v;
  if (u) {
    line["other"] = *u;
  }
  _hooks->trace->emit(line);
}

void Explorer::reset() {
  _orient.clear();
  std::fill(_levels.begin(), _levels.end(), kUnreached);
  std::fill(_conflict_round.begin(), _conflict_round.end(), kUnreached);
  std::fill(_activation.begin(), _activation.end(), Activation::kNone);
  _round = 0;
  _first_round_empty = false;
}

void Explorer::direct(std::size_t e, MachineIndex toward, const char *event) {
  _orient.direct(e, toward);
  trace(event, _ctx->rocks.edge(e).other(toward), toward);
}

// First neutral (v, u) in lexicographic order with load(v) + w_vu over the
// overload bound, v restricted to `marked` when given; directs it toward u.
bool Explorer::direct_first_forced(const std::vector<bool> *marked, MachineIndex &tail, MachineIndex &head) {
  const RockGraph &graph = _ctx->rocks;
  for (MachineIndex v = 0; v < graph.node_count(); ++v) {
    if (marked != nullptr && !(*marked)[v]) {
      continue;
    }
    for (const Incidence &inc : graph.incident(v)) {
      if (_orient.neutral(inc.edge) && _th.overload.exceeded_by(load(v) + graph.edge(inc.edge).weight)) {
        direct(inc.edge, inc.other, "forced");
        tail = v;
        head = inc.other;
        return true;
      }
    }
  }
  return false;
}

void Explorer::forced_orientations() {
  MachineIndex tail = 0;
  MachineIndex head = 0;
  while (direct_first_forced(nullptr, tail, head)) {
    std::vector<bool> marked(_ctx->machine_count(), false);
    marked[head] = true;
    while (direct_first_forced(&marked, tail, head)) {
      marked[head] = true;
    }
  }
}

bool Explorer::start_round() {
  const std::size_t n = _ctx->machine_count();
  std::vector<bool> fresh(n, false);
  bool any = false;
  if (_round == 0) {
    for (MachineIndex v = 0; v < n; ++v) {
      if (overloaded(v)) {
        fresh[v] = true;
        any = true;
      }
    }
    _first_round_empty = !any;
  } else {
    for (std::size_t p = 0; p < _at.size(); ++p) {
      if (_levels[_at[p]] != _round - 1) {
        continue;
      }
      for (const MachineIndex v : _ctx->pebbles[p].eligible) {
        if (_levels[v] == kUnreached && !fresh[v]) {
          fresh[v] = true;
          any = true;
        }
      }
    }
  }
  if (!any) {
    return false;
  }
  for (MachineIndex v = 0; v < n; ++v) {
    if (fresh[v]) {
      _levels[v] = _round;
      _activation[v] = Activation::kTypeA;
      if (_conflict_round[v] == kUnreached) {
        _conflict_round[v] = _round;
      }
      trace("activate_a", v);
    }
  }
  return true;
}

void Explorer::build_conflict_set(const FakeChoice &choose) {
  const RockGraph &graph = _ctx->rocks;
  for (;;) {
    // Absorb every node with a father in C, to closure.
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (_orient.neutral(e)) {
          continue;
        }
        const MachineIndex head = _orient.head(e);
        const MachineIndex tail = graph.edge(e).other(head);
        if (in_conflict(head) && !in_conflict(tail)) {
          _conflict_round[tail] = _round;
          trace("absorb", tail, head);
          grew = true;
        }
      }
    }

    std::vector<std::pair<MachineIndex, MachineIndex>> candidates;
    std::vector<std::size_t> edges;
    for (MachineIndex v = 0; v < graph.node_count(); ++v) {
      if (!in_conflict(v)) {
        continue;
      }
      for (const Incidence &inc : graph.incident(v)) {
        if (_orient.neutral(inc.edge)) {
          candidates.emplace_back(v, inc.other);
          edges.push_back(inc.edge);
        }
      }
    }
    if (candidates.empty()) {
      return;
    }
    const std::size_t pick = choose ? choose(candidates) : 0;
    direct(edges.at(pick), candidates.at(pick).second, "fake");
    forced_orientations();
  }
}

std::vector<std::pair<MachineIndex, Weight>> Explorer::fathers(MachineIndex v) const {
  std::vector<std::pair<MachineIndex, Weight>> out;
  for (const Incidence &inc : _ctx->rocks.incident(v)) {
    if (!_orient.neutral(inc.edge) && _orient.head(inc.edge) == inc.other && in_conflict(inc.other)) {
      out.emplace_back(inc.other, _ctx->rocks.edge(inc.edge).weight);
    }
  }
  return out;
}

std::vector<std::pair<MachineIndex, Weight>> Explorer::children(MachineIndex v) const {
  std::vector<std::pair<MachineIndex, Weight>> out;
  for (const Incidence &inc : _ctx->rocks.incident(v)) {
    if (!_orient.neutral(inc.edge) && _orient.head(inc.edge) == v && in_conflict(inc.other)) {
      out.emplace_back(inc.other, _ctx->rocks.edge(inc.edge).weight);
    }
  }
  return out;
}

void Explorer::activate() {
  const std::size_t n = _ctx->machine_count();
  bool changed = true;
  while (changed) {
    changed = false;
    for (MachineIndex v = 0; v < n; ++v) {
      if (!in_conflict(v) || activated(v)) {
        continue;
      }
      const Weight own = _ctx->dl[v] + _pl[v];
      const auto up = fathers(v);
      const bool rule1 = std::any_of(up.begin(), up.end(), [&](const auto &f) {
        return _th.overload.exceeded_by(own + f.second);
      });
      bool rule2 = false;
      if (!rule1) {
        auto light_to_active = [&](const std::pair<MachineIndex, Weight> &x) {
          return activated(x.first) && _th.rule2.strictly_above(x.second);
        };
        const auto down = children(v);
        rule2 = std::any_of(up.begin(), up.end(), light_to_active) ||
                std::any_of(down.begin(), down.end(), light_to_active);
      }
      if (rule1 || rule2) {
        _levels[v] = _round;
        _activation[v] = rule1 ? Activation::kRule1 : Activation::kRule2;
        trace(rule1 ? "activate_r1" : "activate_r2", v);
        changed = true;
      }
    }
  }
}

void Explorer::run(const FakeChoice &choose) {
  reset();
  forced_orientations();
  while (start_round()) {
    build_conflict_set(choose);
    activate();
    end_round();
  }
}

std::vector<MachineIndex> Explorer::activated_nodes() const {
  std::vector<MachineIndex> out;
  for (MachineIndex v = 0; v < _levels.size(); ++v) {
    if (activated(v)) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<MachineIndex> Explorer::conflict_nodes() const {
  std::vector<MachineIndex> out;
  for (MachineIndex v = 0; v < _conflict_round.size(); ++v) {
    if (in_conflict(v)) {
      out.push_back(v);
    }
  }
  return out;
}

std::int64_t Explorer::potential() const {
  const auto n = static_cast<std::int64_t>(_ctx->machine_count());
  std::int64_t phi = 0;
  for (const MachineIndex v : _at) {
    if (activated(v)) {
      phi += n - static_cast<std::int64_t>(_levels[v]);
    }
  }
  return phi;
}

bool Explorer::push_allowed(const PushMove &move) const {
  if (move.pebble >= _at.size() || _at[move.pebble] != move.from || move.from == move.to) {
    return false;
  }
  const Pebble &pebble = _ctx->pebbles[move.pebble];
  if (!std::binary_search(pebble.eligible.begin(), pebble.eligible.end(), move.to)) {
    return false;
  }
  if (!activated(move.from) || _levels[move.to] != _levels[move.from] + 1) {
    return false;
  }
  if (!_th.push.admits(load(move.to))) {
    return false;
  }
  if (!in_conflict(move.to) || children(move.to).empty()) {
    return true;
  }
  const Weight own = _ctx->dl[move.to] + _pl[move.to];
  const auto up = fathers(move.to);
  return std::all_of(up.begin(), up.end(), [&](const auto &f) { return _th.push.admits(own + f.second); });
}

std::optional<PushMove> Explorer::find_push() const {
  std::optional<PushMove> best;
  auto key = [](const PushMove &m) { return std::make_tuple(m.from, m.pebble, m.to); };
  for (std::size_t p = 0; p < _at.size(); ++p) {
    if (!activated(_at[p])) {
      continue;
    }
    for (const MachineIndex to : _ctx->pebbles[p].eligible) {
      const PushMove move{p, _at[p], to};
      if (push_allowed(move) && (!best || key(move) < key(*best))) {
        best = move;
      }
    }
  }
  return best;
}

void Explorer::move_pebble(const PushMove &move) {
  const Weight w = _ctx->pebbles[move.pebble].weight;
  _at[move.pebble] = move.to;
  _pl[move.from] -= w;
  _pl[move.to] += w;
}

//
// Algorithm loop
//

namespace {
Declaration declare(const GuessContext &ctx, const Explorer &explorer) {
  ActivatedSetWitness witness;
  witness.mode = SolveMode::kGeneral;
  witness.activated = explorer.activated_nodes();
  std::vector<bool> mask(ctx.machine_count(), false);
  for (const MachineIndex v : witness.activated) {
    witness.levels.push_back(explorer.levels()[v]);
    mask[v] = true;
  }
  witness.conflict = explorer.conflict_nodes();
  witness.dl = ctx.dl;
  witness.pl = explorer.pl();
  witness.pebbles = placed_pebbles(ctx, explorer.placement());
  const RockLoad rock_load = min_rock_load_into(ctx.rocks, mask);
  if (rock_load.reachable) {
    witness.min_rock_load = rock_load.value;
  }
  return Declaration{ctx.t, ctx.mode, ctx.beta, witness};
}

// Directed edges keep their heads; the neutral ones are oriented so that each
// node receives at most one of them.
std::vector<MachineIndex> final_heads(const GuessContext &ctx, const OrientationState &orient) {
  const RockGraph &graph = ctx.rocks;
  std::vector<MachineIndex> heads(graph.edge_count(), 0);
  std::vector<Rock> neutral;
  std::vector<std::size_t> neutral_edge;
  std::vector<bool> has_incoming(graph.node_count(), false);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (orient.neutral(e)) {
      neutral.push_back(graph.edge(e));
      neutral_edge.push_back(e);
    } else {
      heads[e] = orient.head(e);
      has_incoming[heads[e]] = true;
    }
  }
  const RockGraph rest(graph.node_count(), neutral);
  std::vector<std::optional<MachineIndex>> roots(rest.systems().size());
  for (std::size_t s = 0; s < rest.systems().size(); ++s) {
    for (const MachineIndex v : rest.systems()[s].nodes) {
      if (has_incoming[v]) {
        roots[s] = v;
        break;
      }
    }
  }
  const std::vector<MachineIndex> rest_heads = orient_systems(rest, roots);
  for (std::size_t k = 0; k < neutral_edge.size(); ++k) {
    heads[neutral_edge[k]] = rest_heads[k];
  }
  return heads;
}
} // namespace

CoreOutcome run_core_general(
    const Instance &instance,
    const GuessContext &ctx,
    const Rational &beta,
    const CoreHooks &hooks,
    const GeneralCoreOptions &options
) {
  const ThresholdsG th = ThresholdsG::make(beta, ctx.t);
  Explorer explorer(ctx, th, initial_placement(ctx));
  const std::size_t push_cap = ctx.machine_count() * ctx.pebbles.size();
  std::size_t pushes = 0;

  explorer.set_hooks(&hooks, pushes);
  explorer.run(options.choose);
  for (;;) {
    if (explorer.first_round_empty()) {
      const std::vector<MachineIndex> heads = final_heads(ctx, explorer.orientation());
      CoreSolution solution = finish_solution(instance, ctx, explorer.placement(), heads);
      if (th.overload.exceeded_by(solution.makespan)) {
        throw InvariantViolation(
            "general core produced makespan " + std::to_string(solution.makespan) + " above its bound at t=" +
            std::to_string(ctx.t)
        );
      }
      return CoreOutcome{std::move(solution), pushes};
    }

    const std::optional<PushMove> move = explorer.find_push();
    if (!move) {
      hooks.emit({{"core", "general"}, {"t", ctx.t}, {"event", "declare"}});
      return CoreOutcome{declare(ctx, explorer), pushes};
    }

    PushRecord record;
    record.mode = SolveMode::kGeneral;
    record.t = ctx.t;
    record.pebble = move->pebble;
    record.from = move->from;
    record.to = move->to;
    record.levels_before = explorer.levels();
    record.potential_before = explorer.potential();

    explorer.move_pebble(*move);
    ++pushes;
    hooks.emit(
        {{"core", "general"},
         {"t", ctx.t},
         {"iteration", pushes},
         {"event", "push"},
         {"pebble", move->pebble},
         {"from", instance.machines[move->from].id},
         {"to", instance.machines[move->to].id}}
    );
    explorer.set_hooks(&hooks, pushes);
    explorer.run(options.choose);

    record.levels_after = explorer.levels();
    record.potential_after = explorer.potential();
    if (hooks.on_push) {
      hooks.on_push(record);
    }
    if (record.potential_after >= record.potential_before) {
      throw InvariantViolation("general push did not decrease the potential");
    }
    for (MachineIndex v = 0; v < record.levels_after.size(); ++v) {
      if (record.levels_after[v] < record.levels_before[v]) {
        throw InvariantViolation("general push lowered the level of a node");
      }
    }
    if (pushes > push_cap) {
      throw InvariantViolation("general core exceeded |V|*|P| pushes");
    }
  }
}

} // namespace gbl

/*******************************************************************************
 * Core for heavy jobs restricted to two machines and light jobs of weight at
 * most beta * t anywhere.
 *
 * Rock edges start neutral each iteration. Forced orientations point an edge
 * away from a node that could not absorb it; the exploration then grows an
 * activated set A (with levels) and a conflict set C, the nodes that can
 * reach trouble along directed edges, fake-orienting neutral edges out of C.
 * A pebble push moves load one level outwards; when none exists the activated
 * set certifies OPT >= t+1.
 *
 * @file:   general_core.h
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gbl/core.h"
#include "gbl/rational.h"
#include "gbl/trace.h"
#include "gbl/two_valued_core.h"

namespace gbl {

struct ThresholdsG {
  AffineBound overload; // (5/3 + beta/3) t
  AffineBound push;     // (5/3 - 2 beta/3) t
  AffineBound rule2;    // (2/3 + beta/3) t

  static ThresholdsG make(const Rational &beta, Weight t);
};

enum class EdgeDir : std::uint8_t { kNeutral, kTowardA, kTowardB };

class OrientationState {
public:
  OrientationState() = default;
  explicit OrientationState(const RockGraph &graph);

  [[nodiscard]] EdgeDir dir(std::size_t e) const { return _dir[e]; }
  [[nodiscard]] bool neutral(std::size_t e) const { return _dir[e] == EdgeDir::kNeutral; }
  // Endpoint the edge points to; requires a directed edge.
  [[nodiscard]] MachineIndex head(std::size_t e) const;
  [[nodiscard]] Weight rl(MachineIndex v) const { return _rl[v]; }
  [[nodiscard]] const std::vector<EdgeDir> &dirs() const { return _dir; }

  void direct(std::size_t e, MachineIndex toward);
  void clear();

  bool operator==(const OrientationState &) const = default;

private:
  const RockGraph *_graph = nullptr;
  std::vector<EdgeDir> _dir;
  std::vector<Weight> _rl;
};

enum class Activation : std::uint8_t { kNone, kTypeA, kRule1, kRule2 };

// Picks one of the candidate fake orientations, given as ordered pairs
// (v in C, u) in lexicographic order; returns its position.
using FakeChoice = std::function<std::size_t(const std::vector<std::pair<MachineIndex, MachineIndex>> &)>;

// One exploration over a fixed pebble placement. Copyable so a round can be
// replayed from the same snapshot.
class Explorer {
public:
  Explorer(const GuessContext &ctx, const ThresholdsG &th, std::vector<MachineIndex> placement);

  void set_hooks(const CoreHooks *hooks, std::size_t iteration);

  // Full exploration: reset, forced orientations, rounds until A_i is empty.
  void run(const FakeChoice &choose = {});

  // Step-wise form of run().
  void reset();
  void forced_orientations();
  bool start_round();
  void build_conflict_set(const FakeChoice &choose = {});
  void activate();
  void end_round() { ++_round; }

  [[nodiscard]] const GuessContext &ctx() const { return *_ctx; }
  [[nodiscard]] const ThresholdsG &thresholds() const { return _th; }
  [[nodiscard]] const std::vector<MachineIndex> &placement() const { return _at; }
  [[nodiscard]] const std::vector<Weight> &pl() const { return _pl; }
  [[nodiscard]] const OrientationState &orientation() const { return _orient; }
  [[nodiscard]] Weight load(MachineIndex v) const { return _ctx->dl[v] + _pl[v] + _orient.rl(v); }
  [[nodiscard]] bool overloaded(MachineIndex v) const { return _th.overload.exceeded_by(load(v)); }

  [[nodiscard]] const std::vector<Level> &levels() const { return _levels; }
  [[nodiscard]] const std::vector<Level> &conflict_round() const { return _conflict_round; }
  [[nodiscard]] const std::vector<Activation> &activation() const { return _activation; }
  [[nodiscard]] bool in_conflict(MachineIndex v) const { return _conflict_round[v] != kUnreached; }
  [[nodiscard]] bool activated(MachineIndex v) const { return _levels[v] != kUnreached; }
  [[nodiscard]] std::vector<MachineIndex> activated_nodes() const;
  [[nodiscard]] std::vector<MachineIndex> conflict_nodes() const;
  [[nodiscard]] bool first_round_empty() const { return _first_round_empty; }
  [[nodiscard]] Level round() const { return _round; }

  // Neighbours of v in C joined by an edge pointing away from v (fathers) or
  // into v (children).
  [[nodiscard]] std::vector<std::pair<MachineIndex, Weight>> fathers(MachineIndex v) const;
  [[nodiscard]] std::vector<std::pair<MachineIndex, Weight>> children(MachineIndex v) const;

  [[nodiscard]] std::int64_t potential() const;

  [[nodiscard]] std::optional<PushMove> find_push() const;
  [[nodiscard]] bool push_allowed(const PushMove &move) const;
  // Relocates the pebble; the exploration must be re-run afterwards.
  void move_pebble(const PushMove &move);

private:
  bool direct_first_forced(const std::vector<bool> *marked, MachineIndex &tail, MachineIndex &head);
  void direct(std::size_t e, MachineIndex toward, const char *event);
  void trace(const char *event, MachineIndex v, std::optional<MachineIndex> u = std::nullopt) const;

  const GuessContext *_ctx;
  ThresholdsG _th;
  std::vector<MachineIndex> _at;
  std::vector<Weight> _pl;
  OrientationState _orient;
  std::vector<Level> _levels;
  std::vector<Level> _conflict_round;
  std::vector<Activation> _activation;
  Level _round = 0;
  bool _first_round_empty = false;
  const CoreHooks *_hooks = nullptr;
  std::size_t _iteration = 0;
};

struct GeneralCoreOptions {
  FakeChoice choose; // default: lowest (v, u)
};

CoreOutcome run_core_general(
    const Instance &instance,
    const GuessContext &ctx,
    const Rational &beta,
    const CoreHooks &hooks = {},
    const GeneralCoreOptions &options = {}
);

} // namespace gbl

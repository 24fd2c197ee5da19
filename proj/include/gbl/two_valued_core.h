/*******************************************************************************
 * Local search for two job weights w < W on guesses with 2w <= t < 2W (or
 * any t < 2W with the improved thresholds when W >= 2w).
 *
 * Nodes are classified by dl + pl; systems with too many critical nodes are
 * bad. Each round labels the activated set with levels and pushes one pebble
 * one level outwards, until no system is bad or no push exists.
 *
 * @file:   two_valued_core.h
 ******************************************************************************/
#pragma once

#include <optional>
#include <vector>

#include "gbl/core.h"
#include "gbl/rational.h"
#include "gbl/trace.h"

namespace gbl {

enum class NodeClass { kUncritical, kMiddle, kCritical, kHypercritical };
enum class SystemStatus { kGood, kBad };
enum class ThresholdVariant { kStandard, kImproved };

const char *to_string(NodeClass c);
const char *to_string(SystemStatus s);

struct Thresholds2V {
  ThresholdVariant variant = ThresholdVariant::kStandard;
  AffineBound uncritical_max;
  AffineBound critical_min_exclusive;
  AffineBound hyper_min_exclusive;
  AffineBound makespan_bound;

  // Standard: 1.5t - W - w, 1.5t - W, 1.5t. Improved (needs W >= 2w): the same
  // with 1.5t replaced by t + floor(W/2).
  static Thresholds2V make(ThresholdVariant variant, Weight t, Weight heavy, Weight light);
};

NodeClass classify_load(Weight load, const Thresholds2V &th);

struct PushMove {
  std::size_t pebble = 0;
  MachineIndex from = 0;
  MachineIndex to = 0;

  bool operator==(const PushMove &) const = default;
};

class TwoValuedState {
public:
  TwoValuedState(const GuessContext &ctx, Thresholds2V th);
  TwoValuedState(const GuessContext &ctx, Thresholds2V th, std::vector<MachineIndex> placement);

  [[nodiscard]] const GuessContext &ctx() const { return *_ctx; }
  [[nodiscard]] const Thresholds2V &thresholds() const { return _th; }
  [[nodiscard]] const std::vector<MachineIndex> &placement() const { return _at; }
  [[nodiscard]] const std::vector<Weight> &pl() const { return _pl; }
  [[nodiscard]] Weight load(MachineIndex v) const { return _ctx->dl[v] + _pl[v]; }

  [[nodiscard]] NodeClass classify_node(MachineIndex v) const;
  [[nodiscard]] SystemStatus system_status(std::size_t system) const;
  // Status if `extra` more weight sat at v.
  [[nodiscard]] SystemStatus system_status_with(std::size_t system, MachineIndex v, Weight extra) const;
  [[nodiscard]] bool any_bad_system() const;

  // Recomputes the activated set and its levels from scratch.
  void label_levels();
  [[nodiscard]] const std::vector<Level> &levels() const { return _levels; }
  [[nodiscard]] std::vector<MachineIndex> activated() const;
  [[nodiscard]] std::int64_t potential() const;

  [[nodiscard]] std::optional<PushMove> find_push() const;
  // Throws std::invalid_argument for a move find_push would not return, and
  // InvariantViolation if levels drop or the potential does not decrease.
  PushRecord apply_push(const PushMove &move);
  [[nodiscard]] std::size_t push_count() const { return _pushes; }

private:
  [[nodiscard]] bool push_allowed(const PushMove &move) const;

  const GuessContext *_ctx;
  Thresholds2V _th;
  std::vector<MachineIndex> _at;
  std::vector<Weight> _pl;
  std::vector<Level> _levels;
  std::size_t _pushes = 0;
};

CoreOutcome run_core_two_valued(
    const Instance &instance,
    const GuessContext &ctx,
    const Thresholds2V &th,
    const CoreHooks &hooks = {}
);

} // namespace gbl

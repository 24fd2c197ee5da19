/*******************************************************************************
 * @file:   matching_core.cc
 ******************************************************************************/
#include "gbl/matching_core.h"

#include <algorithm>
#include <queue>

namespace gbl {

namespace {
struct Item {
  JobIndex job;
  Weight weight;
  std::vector<MachineIndex> fits;
};

constexpr std::size_t kFree = static_cast<std::size_t>(-1);

class Matcher {
public:
  Matcher(const std::vector<Item> &items, std::size_t machines)
      : _items(items),
        _item_of(machines, kFree),
        _machine_of(items.size(), kFree) {}

  bool augment(std::size_t i) {
    _visited.assign(_item_of.size(), false);
    return try_item(i);
  }

  [[nodiscard]] std::size_t machine_of(std::size_t i) const { return _machine_of[i]; }
  [[nodiscard]] std::size_t item_of(MachineIndex m) const { return _item_of[m]; }

private:
  bool try_item(std::size_t i) {
    for (const MachineIndex m : _items[i].fits) {
      if (_visited[m]) {
        continue;
      }
      _visited[m] = true;
      if (_item_of[m] == kFree || try_item(_item_of[m])) {
        _item_of[m] = i;
        _machine_of[i] = m;
        return true;
      }
    }
    return false;
  }

  const std::vector<Item> &_items;
  std::vector<std::size_t> _item_of;
  std::vector<std::size_t> _machine_of;
  std::vector<bool> _visited;
};
} // namespace

CoreOutcome solve_unit_capacity(const Instance &instance, const GuessContext &ctx) {
  std::vector<Item> items;
  auto fitting = [&](Weight w, const std::vector<MachineIndex> &eligible) {
    std::vector<MachineIndex> fits;
    for (const MachineIndex m : eligible) {
      if (ctx.dl[m] + w <= ctx.t) {
        fits.push_back(m);
      }
    }
    return fits;
  };
  for (const Pebble &pebble : ctx.pebbles) {
    if (!pebble.job) {
      throw InvariantViolation("matching core cannot witness merged rock pairs");
    }
    items.push_back(Item{*pebble.job, pebble.weight, fitting(pebble.weight, pebble.eligible)});
  }
  for (const Rock &rock : ctx.rocks.edges()) {
    items.push_back(Item{rock.job, rock.weight, fitting(rock.weight, {rock.a, rock.b})});
  }

  if (items.size() >= 2) {
    std::vector<Weight> weights;
    for (const Item &item : items) {
      weights.push_back(item.weight);
    }
    std::partial_sort(weights.begin(), weights.begin() + 2, weights.end());
    if (weights[0] + weights[1] <= ctx.t) {
      throw InvariantViolation(
          "matching core called at t=" + std::to_string(ctx.t) + " where two jobs fit on one machine"
      );
    }
  }

  Matcher matcher(items, ctx.machine_count());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (matcher.augment(i)) {
      continue;
    }
    // Everything reachable from i by alternating paths forms the witness.
    std::vector<bool> item_seen(items.size(), false);
    std::vector<bool> machine_seen(ctx.machine_count(), false);
    std::queue<std::size_t> queue;
    queue.push(i);
    item_seen[i] = true;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop();
      for (const MachineIndex m : items[x].fits) {
        if (machine_seen[m]) {
          continue;
        }
        machine_seen[m] = true;
        const std::size_t y = matcher.item_of(m);
        if (y != kFree && !item_seen[y]) {
          item_seen[y] = true;
          queue.push(y);
        }
      }
    }
    HallWitness witness;
    for (std::size_t x = 0; x < items.size(); ++x) {
      if (item_seen[x]) {
        witness.jobs.push_back(items[x].job);
      }
    }
    for (MachineIndex m = 0; m < ctx.machine_count(); ++m) {
      if (machine_seen[m]) {
        witness.neighborhood.push_back(m);
      }
    }
    std::sort(witness.jobs.begin(), witness.jobs.end());
    witness.dl = ctx.dl;
    if (witness.neighborhood.size() >= witness.jobs.size()) {
      throw InvariantViolation("Hall witness does not recount");
    }
    return CoreOutcome{Declaration{ctx.t, ctx.mode, ctx.beta, witness}, 0};
  }

  std::vector<MachineIndex> pebble_at(ctx.pebbles.size());
  std::vector<MachineIndex> rock_head(ctx.rocks.edge_count());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i < ctx.pebbles.size()) {
      pebble_at[i] = matcher.machine_of(i);
    } else {
      rock_head[i - ctx.pebbles.size()] = matcher.machine_of(i);
    }
  }
  CoreSolution solution = finish_solution(instance, ctx, pebble_at, rock_head);
  if (solution.makespan > ctx.t) {
    throw InvariantViolation("matching core produced a makespan above t");
  }
  return CoreOutcome{std::move(solution), 0};
}

} // namespace gbl

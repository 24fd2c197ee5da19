/*******************************************************************************
 * @file:   relief_core.cc
 ******************************************************************************/
#include "gbl/relief_core.h"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace gbl {

namespace {
struct Arc {
  std::size_t to;
  std::size_t rev;
  Weight cap;
};

// Generic FIFO push-relabel on a small network.
class FlowNetwork {
public:
  explicit FlowNetwork(std::size_t n) : _adj(n), _height(n, 0), _excess(n, 0), _cursor(n, 0) {}

  // Returns the index of the forward arc within _adj[from].
  std::size_t add_arc(std::size_t from, std::size_t to, Weight cap) {
    _adj[from].push_back(Arc{to, _adj[to].size(), cap});
    _adj[to].push_back(Arc{from, _adj[from].size() - 1, 0});
    ++_arcs;
    return _adj[from].size() - 1;
  }

  Weight max_flow(std::size_t source, std::size_t sink, std::size_t op_cap, std::size_t &ops) {
    const std::size_t n = _adj.size();
    _height[source] = n;
    std::deque<std::size_t> active;
    for (Arc &arc : _adj[source]) {
      if (arc.cap > 0) {
        const Weight d = arc.cap;
        arc.cap = 0;
        _adj[arc.to][arc.rev].cap += d;
        _excess[arc.to] += d;
        _excess[source] -= d;
        if (arc.to != sink) {
          active.push_back(arc.to);
        }
      }
    }
    while (!active.empty()) {
      const std::size_t u = active.front();
      active.pop_front();
      while (_excess[u] > 0) {
        if (++ops > op_cap) {
          throw InvariantViolation("relief core exceeded its push/relabel budget");
        }
        if (_cursor[u] == _adj[u].size()) {
          std::size_t lowest = 2 * n;
          for (const Arc &arc : _adj[u]) {
            if (arc.cap > 0) {
              lowest = std::min(lowest, _height[arc.to]);
            }
          }
          _height[u] = lowest + 1;
          _cursor[u] = 0;
          continue;
        }
        Arc &arc = _adj[u][_cursor[u]];
        if (arc.cap > 0 && _height[u] == _height[arc.to] + 1) {
          const Weight d = std::min(_excess[u], arc.cap);
          arc.cap -= d;
          _adj[arc.to][arc.rev].cap += d;
          _excess[u] -= d;
          const bool was_idle = _excess[arc.to] == 0;
          _excess[arc.to] += d;
          if (was_idle && arc.to != source && arc.to != sink) {
            active.push_back(arc.to);
          }
        } else {
          ++_cursor[u];
        }
      }
    }
    return _excess[sink];
  }

  // Nodes reachable from `from` through arcs with residual capacity.
  std::vector<bool> residual_reach(std::size_t from) const {
    std::vector<bool> seen(_adj.size(), false);
    std::queue<std::size_t> queue;
    queue.push(from);
    seen[from] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (const Arc &arc : _adj[u]) {
        if (arc.cap > 0 && !seen[arc.to]) {
          seen[arc.to] = true;
          queue.push(arc.to);
        }
      }
    }
    return seen;
  }

  // Flow on a forward arc (capacity returned to its reverse arc).
  [[nodiscard]] Weight flow(std::size_t from, std::size_t arc) const {
    const Arc &a = _adj[from][arc];
    return _adj[a.to][a.rev].cap;
  }

  [[nodiscard]] std::size_t height(std::size_t node) const { return _height[node]; }
  [[nodiscard]] std::size_t arc_count() const { return _arcs; }

private:
  std::vector<std::vector<Arc>> _adj;
  std::vector<std::size_t> _height;
  std::vector<Weight> _excess;
  std::vector<std::size_t> _cursor;
  std::size_t _arcs = 0;
};

struct Item {
  JobIndex job;
  Weight weight;
  std::vector<MachineIndex> eligible;
};

// Cancels cycles in the support of an integral job-to-machine flow until the
// support is a forest; job and machine totals are preserved.
std::size_t cancel_cycles(std::vector<std::map<MachineIndex, Weight>> &x, std::size_t machines) {
  const std::size_t items = x.size();
  std::size_t cancelled = 0;
  for (;;) {
    // Undirected support graph: items are 0..items-1, machines follow.
    const std::size_t n = items + machines;
    std::vector<std::size_t> parent(n, SIZE_MAX);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> cycle;
    for (std::size_t root = 0; root < items && cycle.empty(); ++root) {
      if (seen[root]) {
        continue;
      }
      std::vector<std::size_t> stack{root};
      seen[root] = true;
      while (!stack.empty() && cycle.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        auto visit = [&](std::size_t v) {
          if (!cycle.empty() || v == parent[u]) {
            return;
          }
          if (seen[v]) {
            // Close the cycle through the lowest common ancestor.
            std::vector<std::size_t> up_u{u};
            std::vector<std::size_t> up_v{v};
            std::vector<bool> on_u(n, false);
            on_u[u] = true;
            for (std::size_t a = u; parent[a] != SIZE_MAX;) {
              a = parent[a];
              up_u.push_back(a);
              on_u[a] = true;
            }
            std::size_t meet = v;
            while (!on_u[meet]) {
              meet = parent[meet];
              up_v.push_back(meet);
            }
            while (up_u.back() != meet) {
              up_u.pop_back();
            }
            cycle = up_u; // u .. meet
            for (std::size_t k = up_v.size() - 1; k-- > 0;) {
              cycle.push_back(up_v[k]); // back down to v
            }
            return;
          }
          seen[v] = true;
          parent[v] = u;
          stack.push_back(v);
        };
        if (u < items) {
          for (const auto &[m, f] : x[u]) {
            visit(items + m);
          }
        } else {
          for (std::size_t i = 0; i < items; ++i) {
            if (x[i].count(u - items) != 0) {
              visit(i);
            }
          }
        }
      }
    }
    if (cycle.empty()) {
      return cancelled;
    }
    // Alternate +/- along the closed walk cycle[0], cycle[1], ..., cycle[0].
    auto edge_flow = [&](std::size_t a, std::size_t b) -> Weight & {
      return a < items ? x[a][b - items] : x[b][a - items];
    };
    Weight delta = -1;
    for (std::size_t k = 1; k < cycle.size() + 1; k += 2) {
      const Weight f = edge_flow(cycle[k - 1], cycle[k % cycle.size()]);
      delta = delta < 0 ? f : std::min(delta, f);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      Weight &f = edge_flow(cycle[k], cycle[(k + 1) % cycle.size()]);
      f += (k % 2 == 0) ? -delta : delta;
    }
    for (auto &row : x) {
      std::erase_if(row, [](const auto &entry) { return entry.second == 0; });
    }
    ++cancelled;
  }
}
} // namespace

CoreOutcome run_preflow_core(const Instance &instance, const GuessContext &ctx, ReliefStats *stats) {
  std::vector<Item> items;
  for (const Pebble &pebble : ctx.pebbles) {
    if (!pebble.job) {
      throw InvariantViolation("relief core cannot witness merged rock pairs");
    }
    items.push_back(Item{*pebble.job, pebble.weight, pebble.eligible});
  }
  for (const Rock &rock : ctx.rocks.edges()) {
    items.push_back(Item{rock.job, rock.weight, {rock.a, rock.b}});
  }

  const std::size_t m = ctx.machine_count();
  const std::size_t source = 0;
  const std::size_t first_item = 1;
  const std::size_t first_machine = first_item + items.size();
  const std::size_t sink = first_machine + m;
  FlowNetwork network(sink + 1);

  Weight total = 0;
  Weight heaviest = 0;
  for (const Item &item : items) {
    total += item.weight;
    heaviest = std::max(heaviest, item.weight);
  }
  std::vector<std::vector<std::pair<MachineIndex, std::size_t>>> job_arcs(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    network.add_arc(source, first_item + i, items[i].weight);
    for (const MachineIndex v : items[i].eligible) {
      job_arcs[i].emplace_back(v, network.add_arc(first_item + i, first_machine + v, total + 1));
    }
  }
  for (MachineIndex v = 0; v < m; ++v) {
    network.add_arc(first_machine + v, sink, ctx.t - ctx.dl[v]);
  }

  const std::size_t nodes = sink + 1;
  const std::size_t op_cap = 4 * nodes * nodes * std::max<std::size_t>(network.arc_count(), 1);
  std::size_t ops = 0;
  const Weight flow = network.max_flow(source, sink, op_cap, ops);
  if (stats != nullptr) {
    stats->operations = ops;
  }

  if (flow < total) {
    const std::vector<bool> reach = network.residual_reach(source);
    PreflowWitness witness;
    for (MachineIndex v = 0; v < m; ++v) {
      if (reach[first_machine + v]) {
        witness.cut.push_back(v);
      }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (reach[first_item + i]) {
        witness.captive.push_back(items[i].job);
      }
    }
    std::sort(witness.captive.begin(), witness.captive.end());
    witness.dl = ctx.dl;
    for (MachineIndex v = 0; v < m; ++v) {
      witness.heights.push_back(static_cast<std::uint32_t>(network.height(first_machine + v)));
    }
    return CoreOutcome{Declaration{ctx.t, ctx.mode, ctx.beta, witness}, 0};
  }

  std::vector<std::map<MachineIndex, Weight>> x(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto &[v, arc] : job_arcs[i]) {
      const Weight f = network.flow(first_item + i, arc);
      if (f > 0) {
        x[i][v] = f;
      }
    }
  }
  const std::size_t cancelled = cancel_cycles(x, m);
  if (stats != nullptr) {
    stats->cancelled_cycles = cancelled;
  }

  // Root each support tree at a machine; a job takes its first child machine,
  // or its parent when it is a leaf. A machine then receives at most one job
  // beyond the flow it already carries, minus at least one unit of that job.
  std::vector<std::vector<std::size_t>> machine_items(m);
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto &[v, f] : x[i]) {
      machine_items[v].push_back(i);
    }
  }
  std::vector<MachineIndex> chosen(items.size(), SIZE_MAX);
  std::vector<bool> machine_seen(m, false);
  std::vector<bool> item_seen(items.size(), false);
  for (MachineIndex root = 0; root < m; ++root) {
    if (machine_seen[root]) {
      continue;
    }
    machine_seen[root] = true;
    std::queue<MachineIndex> queue;
    queue.push(root);
    while (!queue.empty()) {
      const MachineIndex v = queue.front();
      queue.pop();
      for (const std::size_t i : machine_items[v]) {
        if (item_seen[i]) {
          continue;
        }
        item_seen[i] = true;
        chosen[i] = v;
        for (const auto &[u, f] : x[i]) {
          if (u != v && !machine_seen[u]) {
            if (chosen[i] == v) {
              chosen[i] = u;
            }
            machine_seen[u] = true;
            queue.push(u);
          }
        }
      }
    }
  }

  std::vector<MachineIndex> pebble_at(ctx.pebbles.size());
  std::vector<MachineIndex> rock_head(ctx.rocks.edge_count());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (chosen[i] == SIZE_MAX) {
      throw InvariantViolation("relief core left a job without a machine");
    }
    if (i < ctx.pebbles.size()) {
      pebble_at[i] = chosen[i];
    } else {
      rock_head[i - ctx.pebbles.size()] = chosen[i];
    }
  }
  CoreSolution solution = finish_solution(instance, ctx, pebble_at, rock_head);
  const Weight bound = items.empty() ? ctx.t : ctx.t + heaviest - 1;
  if (solution.makespan > bound) {
    throw InvariantViolation("relief core produced a makespan above t + W - 1");
  }
  return CoreOutcome{std::move(solution), 0};
}

} // namespace gbl

/*******************************************************************************
 * Observation hooks shared by the cores: a JSON-lines event sink and a push
 * callback used by the invariant tests.
 *
 * @file:   trace.h
 ******************************************************************************/
#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "gbl/common.h"

namespace gbl {

class TraceSink {
public:
  virtual ~TraceSink() = default;
  virtual void emit(const nlohmann::ordered_json &event) = 0;
};

class JsonLinesTrace : public TraceSink {
public:
  explicit JsonLinesTrace(std::ostream &out) : _out(out) {}
  void emit(const nlohmann::ordered_json &event) override { _out << event.dump() << '\n'; }

private:
  std::ostream &_out;
};

class MemoryTrace : public TraceSink {
public:
  void emit(const nlohmann::ordered_json &event) override { events.push_back(event); }
  std::vector<nlohmann::ordered_json> events;
};

struct PushRecord {
  SolveMode mode = SolveMode::kTwoValued;
  Weight t = 0;
  std::size_t pebble = 0;
  MachineIndex from = 0;
  MachineIndex to = 0;
  std::vector<Level> levels_before;
  std::vector<Level> levels_after;
  std::int64_t potential_before = 0;
  std::int64_t potential_after = 0;
};

struct CoreHooks {
  TraceSink *trace = nullptr;
  std::function<void(const PushRecord &)> on_push;

  void emit(const nlohmann::ordered_json &event) const {
    if (trace != nullptr) {
      trace->emit(event);
    }
  }
};

} // namespace gbl

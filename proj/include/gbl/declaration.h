/*******************************************************************************
 * "OPT >= t+1" declarations and their witnesses.
 *
 * Payloads refer to machines and jobs by index into the originating
 * instance; the JSON form uses the instance's ids.
 *
 * @file:   declaration.h
 ******************************************************************************/
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gbl/common.h"
#include "gbl/instance.h"
#include "gbl/rational.h"

namespace gbl {

enum class DeclarationKind {
  kDedicatedOverflow,
  kMultiCycleComponent,
  kHallViolation,
  kActivatedSet,
  kPreflowHeight,
};

const char *to_string(DeclarationKind kind);

// Some machine's dedicated load exceeds t, either straight after folding
// single-machine jobs or after further reductions.
struct OverflowWitness {
  MachineIndex machine = 0;
  Weight load = 0;
  bool after_reduction = false;

  bool operator==(const OverflowWitness &) const = default;
};

// Rocks spanning fewer machines than there are rocks.
struct MultiCycleWitness {
  std::vector<MachineIndex> nodes;
  std::vector<JobIndex> rocks;

  bool operator==(const MultiCycleWitness &) const = default;
};

// Jobs whose fitting machines are fewer than the jobs themselves.
struct HallWitness {
  std::vector<JobIndex> jobs;
  std::vector<MachineIndex> neighborhood;
  std::vector<Weight> dl;

  bool operator==(const HallWitness &) const = default;
};

struct PlacedPebble {
  Weight weight = 0;
  std::vector<MachineIndex> eligible;
  std::optional<JobIndex> job;
  std::optional<std::pair<JobIndex, JobIndex>> pair;
  MachineIndex at = 0;

  bool operator==(const PlacedPebble &) const = default;
};

struct ActivatedSetWitness {
  SolveMode mode = SolveMode::kGeneral;
  std::vector<MachineIndex> activated; // ascending
  std::vector<Level> levels;           // parallel to activated
  std::vector<MachineIndex> conflict;  // general mode only
  std::vector<std::string> system_status; // two-valued mode only, per system
  std::vector<Weight> dl;
  std::vector<Weight> pl;
  std::vector<PlacedPebble> pebbles;
  std::optional<Weight> min_rock_load; // empty when no orientation exists

  bool operator==(const ActivatedSetWitness &) const = default;
};

// Machine set S whose captive jobs cannot fit: jobs eligible only inside S
// with dl(S) + w(captive) > |S| t.
struct PreflowWitness {
  std::vector<MachineIndex> cut;
  std::vector<JobIndex> captive;
  std::vector<Weight> dl;
  std::vector<std::uint32_t> heights;

  bool operator==(const PreflowWitness &) const = default;
};

using DeclarationPayload =
    std::variant<OverflowWitness, MultiCycleWitness, HallWitness, ActivatedSetWitness, PreflowWitness>;

struct Declaration {
  Weight t = 0;
  SolveMode mode = SolveMode::kGeneral;
  std::optional<Rational> beta;
  DeclarationPayload payload;

  [[nodiscard]] DeclarationKind kind() const { return static_cast<DeclarationKind>(payload.index()); }
  bool operator==(const Declaration &) const = default;
};

nlohmann::ordered_json declaration_to_json(const Declaration &declaration, const Instance &instance);

// Throws InputError on malformed payloads or unknown ids.
Declaration declaration_from_json(const nlohmann::ordered_json &value, const Instance &instance);

} // namespace gbl

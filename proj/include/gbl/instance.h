/*******************************************************************************
 * Instance data model: machines with dedicated loads and jobs with integral
 * weights and eligible machine sets. Parsing, validation against the
 * structural assumptions of the solvers, and deterministic generators.
 *
 * @file:   instance.h
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbl/common.h"
#include "gbl/rational.h"

namespace gbl {

enum class ModeHint { kAuto, kTwoValued, kGeneral };

std::string to_string(ModeHint hint);
ModeHint parse_mode_hint(std::string_view text);

struct MachineSpec {
  std::string id;
  Weight dedicated_load = 0;

  bool operator==(const MachineSpec &) const = default;
};

struct JobSpec {
  std::string id;
  Weight weight = 1;
  // Indices into Instance::machines, in document order.
  std::vector<MachineIndex> eligible;

  bool operator==(const JobSpec &) const = default;
};

struct Instance {
  std::vector<MachineSpec> machines;
  std::vector<JobSpec> jobs;
  ModeHint mode_hint = ModeHint::kAuto;

  bool operator==(const Instance &) const = default;

  [[nodiscard]] std::optional<MachineIndex> find_machine(std::string_view id) const;
  [[nodiscard]] std::optional<JobIndex> find_job(std::string_view id) const;

  // Largest job weight (0 without jobs).
  [[nodiscard]] Weight max_job_weight() const;
  // Job weights plus declared dedicated loads.
  [[nodiscard]] Weight total_load() const;
  // Declared dedicated load plus single-machine jobs, per machine.
  [[nodiscard]] std::vector<Weight> folded_dedicated_loads() const;
  // Jobs with at least two eligible machines.
  [[nodiscard]] std::size_t assignable_job_count() const;
};

// Throws InputError with line/column for syntax errors, and for duplicate
// ids, dangling machine references, non-positive weights and unknown fields.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance &instance);

Instance load_instance(const std::filesystem::path &path);
void save_instance(const Instance &instance, const std::filesystem::path &path);

struct ValidationReport {
  SolveMode mode = SolveMode::kGeneral;
  std::optional<Rational> beta;
  Weight max_weight = 0;   // W_max over all jobs
  Weight heavy_weight = 0; // W (two-valued)
  Weight light_weight = 0; // w (two-valued)
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

// Auto resolves to two-valued when exactly two multi-machine weights occur and
// every job of the heavier one has at most two eligible machines.
ValidationReport validate(const Instance &instance, ModeHint mode, std::optional<Rational> beta);

// validate() that throws InputError listing every violation.
ValidationReport require_valid(const Instance &instance, ModeHint mode, std::optional<Rational> beta);

// Lower end of the admissible range for beta.
Rational min_beta();
bool beta_in_range(const Rational &beta);

struct TwoValuedParams {
  std::size_t machines = 2;
  std::size_t heavy_jobs = 0;
  std::size_t light_jobs = 0;
  Weight heavy_weight = 2;
  Weight light_weight = 1;
  std::size_t max_light_degree = 2;
  std::uint64_t seed = 0;
  // Dedicated loads drawn uniformly from [0, max_dedicated_load].
  Weight max_dedicated_load = 0;
};

Instance generate_two_valued(const TwoValuedParams &params);

struct GeneralParams {
  std::size_t machines = 2;
  std::size_t jobs = 1;
  Rational beta{7, 10};
  Weight max_weight = 100;
  std::uint64_t seed = 0;
  Weight max_dedicated_load = 0;
};

// Job 1 always has weight exactly max_weight; the others are heavy with
// probability 1/2. Heavy jobs get two machines, light jobs two or more.
Instance generate_general(const GeneralParams &params);

// Path of k+2 machines joined by k+1 rocks of weight floor(0.95 scale) +
// ceil(scale/100); dedicated loads scale, 0, ..., 0, floor(scale/4).
Instance generate_adversarial_path(std::size_t k, Weight scale);

} // namespace gbl

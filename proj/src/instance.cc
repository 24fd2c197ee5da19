/*******************************************************************************
 * @file:   instance.cc
 ******************************************************************************/
#include "gbl/instance.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "gbl/random.h"

namespace gbl {

using nlohmann::json;

std::string to_string(ModeHint hint) {
  switch (hint) {
  case ModeHint::kAuto:
    return "auto";
  case ModeHint::kTwoValued:
    return "two_valued";
  case ModeHint::kGeneral:
    return "general";
  }
  return "auto";
}

ModeHint parse_mode_hint(std::string_view text) {
  if (text == "auto") {
    return ModeHint::kAuto;
  }
  if (text == "two_valued" || text == "two-valued") {
    return ModeHint::kTwoValued;
  }
  if (text == "general") {
    return ModeHint::kGeneral;
  }
  throw InputError("unknown mode '" + std::string(text) + "' (expected auto, two_valued or general)");
}

std::optional<MachineIndex> Instance::find_machine(std::string_view id) const {
  for (MachineIndex i = 0; i < machines.size(); ++i) {
    if (machines[i].id == id) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<JobIndex> Instance::find_job(std::string_view id) const {
  for (JobIndex j = 0; j < jobs.size(); ++j) {
    if (jobs[j].id == id) {
      return j;
    }
  }
  return std::nullopt;
}

Weight Instance::max_job_weight() const {
  Weight best = 0;
  for (const JobSpec &job : jobs) {
    best = std::max(best, job.weight);
  }
  return best;
}

Weight Instance::total_load() const {
  Weight total = 0;
  for (const MachineSpec &machine : machines) {
    total += machine.dedicated_load;
  }
  for (const JobSpec &job : jobs) {
    total += job.weight;
  }
  return total;
}

std::vector<Weight> Instance::folded_dedicated_loads() const {
  std::vector<Weight> dl(machines.size());
  for (MachineIndex i = 0; i < machines.size(); ++i) {
    dl[i] = machines[i].dedicated_load;
  }
  for (const JobSpec &job : jobs) {
    if (job.eligible.size() == 1) {
      dl[job.eligible.front()] += job.weight;
    }
  }
  return dl;
}

std::size_t Instance::assignable_job_count() const {
  return static_cast<std::size_t>(std::count_if(jobs.begin(), jobs.end(), [](const JobSpec &job) {
    return job.eligible.size() >= 2;
  }));
}

//
// Parsing
//

namespace {
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void reject_unknown_fields(const json &object, std::initializer_list<std::string_view> allowed, const std::string &where) {
  for (const auto &[key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("unknown field '" + key + "' in " + where);
    }
  }
}

Weight integer_field(const json &value, const std::string &what) {
  if (!value.is_number_integer()) {
    throw InputError(what + " must be a JSON integer");
  }
  if (value.is_number_unsigned() && value.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Weight>::max())) {
    throw InputError(what + " is out of range");
  }
  return value.get<Weight>();
}

std::string string_field(const json &object, const char *key, const std::string &where) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw InputError("missing field '" + std::string(key) + "' in " + where);
  }
  if (!it->is_string()) {
    throw InputError("field '" + std::string(key) + "' in " + where + " must be a string");
  }
  return it->get<std::string>();
}
} // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(
        "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what()
    );
  }

  if (!doc.is_object()) {
    throw InputError("instance document must be a JSON object");
  }
  reject_unknown_fields(doc, {"machines", "jobs", "mode_hint"}, "instance");

  Instance instance;
  if (const auto it = doc.find("mode_hint"); it != doc.end()) {
    if (!it->is_string()) {
      throw InputError("mode_hint must be a string");
    }
    instance.mode_hint = parse_mode_hint(it->get<std::string>());
  }

  const auto machines = doc.find("machines");
  if (machines == doc.end() || !machines->is_array()) {
    throw InputError("instance needs a 'machines' array");
  }
  std::unordered_map<std::string, MachineIndex> machine_by_id;
  for (const json &entry : *machines) {
    if (!entry.is_object()) {
      throw InputError("machine entries must be objects");
    }
    reject_unknown_fields(entry, {"id", "dedicated_load"}, "machine");
    MachineSpec machine;
    machine.id = string_field(entry, "id", "machine");
    if (const auto it = entry.find("dedicated_load"); it != entry.end()) {
      machine.dedicated_load = integer_field(*it, "dedicated_load of machine '" + machine.id + "'");
      if (machine.dedicated_load < 0) {
        throw InputError("dedicated_load of machine '" + machine.id + "' is negative");
      }
    }
    if (!machine_by_id.emplace(machine.id, instance.machines.size()).second) {
      throw InputError("duplicate machine id '" + machine.id + "'");
    }
    instance.machines.push_back(std::move(machine));
  }

  const auto jobs = doc.find("jobs");
  if (jobs == doc.end() || !jobs->is_array()) {
    throw InputError("instance needs a 'jobs' array");
  }
  std::unordered_set<std::string> job_ids;
  for (const json &entry : *jobs) {
    if (!entry.is_object()) {
      throw InputError("job entries must be objects");
    }
    reject_unknown_fields(entry, {"id", "weight", "eligible"}, "job");
    JobSpec job;
    job.id = string_field(entry, "id", "job");
    if (!job_ids.insert(job.id).second) {
      throw InputError("duplicate job id '" + job.id + "'");
    }
    const auto weight = entry.find("weight");
    if (weight == entry.end()) {
      throw InputError("job '" + job.id + "' has no weight");
    }
    job.weight = integer_field(*weight, "weight of job '" + job.id + "'");
    if (job.weight <= 0) {
      throw InputError("weight of job '" + job.id + "' must be positive");
    }
    const auto eligible = entry.find("eligible");
    if (eligible == entry.end() || !eligible->is_array() || eligible->empty()) {
      throw InputError("job '" + job.id + "' needs a non-empty 'eligible' array");
    }
    std::unordered_set<MachineIndex> seen;
    for (const json &ref : *eligible) {
      if (!ref.is_string()) {
        throw InputError("eligible entries of job '" + job.id + "' must be machine id strings");
      }
      const auto it = machine_by_id.find(ref.get<std::string>());
      if (it == machine_by_id.end()) {
        throw InputError("job '" + job.id + "' references unknown machine '" + ref.get<std::string>() + "'");
      }
      if (!seen.insert(it->second).second) {
        throw InputError("job '" + job.id + "' lists machine '" + it->first + "' twice");
      }
      job.eligible.push_back(it->second);
    }
    instance.jobs.push_back(std::move(job));
  }
  return instance;
}

std::string serialize_instance(const Instance &instance) {
  nlohmann::ordered_json doc;
  doc["machines"] = nlohmann::ordered_json::array();
  for (const MachineSpec &machine : instance.machines) {
    doc["machines"].push_back({{"id", machine.id}, {"dedicated_load", machine.dedicated_load}});
  }
  doc["jobs"] = nlohmann::ordered_json::array();
  for (const JobSpec &job : instance.jobs) {
    std::vector<std::string> eligible;
    eligible.reserve(job.eligible.size());
    for (const MachineIndex m : job.eligible) {
      eligible.push_back(instance.machines.at(m).id);
    }
    doc["jobs"].push_back({{"id", job.id}, {"weight", job.weight}, {"eligible", eligible}});
  }
  doc["mode_hint"] = to_string(instance.mode_hint);
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot read '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void save_instance(const Instance &instance, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out << serialize_instance(instance);
}

//
// Validation
//

Rational min_beta() {
  return Rational(4, 7);
}

bool beta_in_range(const Rational &beta) {
  return beta >= min_beta() && beta < Rational(1);
}

namespace {
void check_structure(const Instance &instance, std::vector<std::string> &violations) {
  std::set<std::string> machine_ids;
  for (const MachineSpec &machine : instance.machines) {
    if (!machine_ids.insert(machine.id).second) {
      violations.push_back("duplicate machine id '" + machine.id + "'");
    }
    if (machine.dedicated_load < 0) {
      violations.push_back("machine '" + machine.id + "' has negative dedicated load");
    }
  }
  std::set<std::string> job_ids;
  for (const JobSpec &job : instance.jobs) {
    if (!job_ids.insert(job.id).second) {
      violations.push_back("duplicate job id '" + job.id + "'");
    }
    if (job.weight < 1) {
      violations.push_back("job '" + job.id + "' has non-positive weight");
    }
    if (job.eligible.empty()) {
      violations.push_back("job '" + job.id + "' has no eligible machine");
    }
    std::set<MachineIndex> seen;
    for (const MachineIndex m : job.eligible) {
      if (m >= instance.machines.size()) {
        violations.push_back("job '" + job.id + "' references a machine out of range");
      } else if (!seen.insert(m).second) {
        violations.push_back("job '" + job.id + "' lists a machine twice");
      }
    }
  }
}

std::vector<Weight> multi_machine_weights(const Instance &instance) {
  std::set<Weight> weights;
  for (const JobSpec &job : instance.jobs) {
    if (job.eligible.size() >= 2) {
      weights.insert(job.weight);
    }
  }
  return {weights.begin(), weights.end()};
}

bool heavy_weight_restricted(const Instance &instance, Weight heavy) {
  return std::all_of(instance.jobs.begin(), instance.jobs.end(), [&](const JobSpec &job) {
    return job.weight != heavy || job.eligible.size() <= 2;
  });
}
} // namespace

ValidationReport validate(const Instance &instance, ModeHint mode, std::optional<Rational> beta) {
  ValidationReport report;
  check_structure(instance, report.violations);
  report.max_weight = instance.max_job_weight();

  const std::vector<Weight> weights = multi_machine_weights(instance);
  if (mode == ModeHint::kAuto) {
    const bool two_valued = weights.size() == 2 && heavy_weight_restricted(instance, weights[1]);
    mode = two_valued ? ModeHint::kTwoValued : ModeHint::kGeneral;
  }

  if (mode == ModeHint::kTwoValued) {
    report.mode = SolveMode::kTwoValued;
    if (weights.size() != 2) {
      report.violations.push_back(
          "two_valued mode needs exactly two distinct weights among multi-machine jobs, found " +
          std::to_string(weights.size())
      );
      return report;
    }
    report.light_weight = weights[0];
    report.heavy_weight = weights[1];
    for (const JobSpec &job : instance.jobs) {
      if (job.weight == report.heavy_weight && job.eligible.size() > 2) {
        report.violations.push_back(
            "heavy job '" + job.id + "' (weight " + std::to_string(job.weight) + ") has " +
            std::to_string(job.eligible.size()) + " eligible machines"
        );
      }
    }
    return report;
  }

  report.mode = SolveMode::kGeneral;
  report.beta = beta;
  if (!beta) {
    report.violations.push_back("general mode requires beta");
    return report;
  }
  if (!beta_in_range(*beta)) {
    report.violations.push_back("beta " + beta->to_string() + " outside [4/7, 1)");
    return report;
  }
  const AffineBound heavy_threshold{*beta, report.max_weight, 0};
  for (const JobSpec &job : instance.jobs) {
    if (heavy_threshold.exceeded_by(job.weight) && job.eligible.size() > 2) {
      report.violations.push_back(
          "heavy job '" + job.id + "' (weight " + std::to_string(job.weight) + " > " + beta->to_string() + " * " +
          std::to_string(report.max_weight) + ") has " + std::to_string(job.eligible.size()) + " eligible machines"
      );
    }
  }
  return report;
}

ValidationReport require_valid(const Instance &instance, ModeHint mode, std::optional<Rational> beta) {
  ValidationReport report = validate(instance, mode, beta);
  if (!report.ok()) {
    std::string message = "instance is not valid for " + to_string(report.mode) + " mode:";
    for (const std::string &violation : report.violations) {
      message += "\n  - " + violation;
    }
    throw InputError(message);
  }
  return report;
}

//
// Generators
//

namespace {
std::vector<MachineSpec> make_machines(std::size_t count, Weight max_dedicated, Rng &rng) {
  std::vector<MachineSpec> machines(count);
  for (std::size_t i = 0; i < count; ++i) {
    machines[i].id = "m" + std::to_string(i + 1);
    machines[i].dedicated_load = max_dedicated > 0 ? rng.uniform(0, max_dedicated) : 0;
  }
  return machines;
}

JobSpec make_job(std::size_t ordinal, Weight weight, std::vector<MachineIndex> eligible) {
  return JobSpec{"j" + std::to_string(ordinal), weight, std::move(eligible)};
}
} // namespace

Instance generate_two_valued(const TwoValuedParams &params) {
  if (params.light_weight >= params.heavy_weight) {
    throw InputError("two-valued generator needs w < W");
  }
  if (params.light_weight < 1) {
    throw InputError("two-valued generator needs w >= 1");
  }
  if (params.machines < 2) {
    throw InputError("two-valued generator needs at least two machines");
  }
  if (params.light_jobs > 0 && params.max_light_degree < 2) {
    throw InputError("light jobs need a maximum degree of at least 2");
  }

  Rng rng(params.seed);
  Instance instance;
  instance.mode_hint = ModeHint::kTwoValued;
  instance.machines = make_machines(params.machines, params.max_dedicated_load, rng);

  std::size_t ordinal = 1;
  for (std::size_t i = 0; i < params.heavy_jobs; ++i) {
    instance.jobs.push_back(make_job(ordinal++, params.heavy_weight, rng.sample(params.machines, 2)));
  }
  const std::size_t max_degree = std::min(params.max_light_degree, params.machines);
  for (std::size_t i = 0; i < params.light_jobs; ++i) {
    const auto degree = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(max_degree)));
    instance.jobs.push_back(make_job(ordinal++, params.light_weight, rng.sample(params.machines, degree)));
  }
  return instance;
}

Instance generate_general(const GeneralParams &params) {
  if (!beta_in_range(params.beta)) {
    throw InputError("beta " + params.beta.to_string() + " outside [4/7, 1)");
  }
  if (params.machines < 2) {
    throw InputError("general generator needs at least two machines");
  }
  if (params.max_weight < 2) {
    throw InputError("general generator needs W_max >= 2");
  }

  Rng rng(params.seed);
  Instance instance;
  instance.mode_hint = ModeHint::kGeneral;
  instance.machines = make_machines(params.machines, params.max_dedicated_load, rng);

  // Heavy weights live in (beta W_max, W_max], light ones in [1, floor(beta W_max)].
  const Weight light_max = (params.beta * Rational(params.max_weight)).floor();
  const Weight heavy_min = light_max + 1;
  const auto m = static_cast<std::int64_t>(params.machines);
  for (std::size_t i = 0; i < params.jobs; ++i) {
    const bool heavy = i == 0 || rng.coin();
    if (heavy) {
      const Weight weight = i == 0 ? params.max_weight : rng.uniform(heavy_min, params.max_weight);
      instance.jobs.push_back(make_job(i + 1, weight, rng.sample(params.machines, 2)));
    } else {
      const Weight weight = rng.uniform(1, light_max);
      const auto degree = static_cast<std::size_t>(rng.uniform(2, m));
      instance.jobs.push_back(make_job(i + 1, weight, rng.sample(params.machines, degree)));
    }
  }
  return instance;
}

Instance generate_adversarial_path(std::size_t k, Weight scale) {
  if (k < 1) {
    throw InputError("adversarial path needs k >= 1");
  }
  if (scale < 100) {
    throw InputError("adversarial path needs scale >= 100");
  }
  const Weight rock = (95 * scale) / 100 + (scale + 99) / 100;

  Instance instance;
  instance.mode_hint = ModeHint::kGeneral;
  const std::size_t nodes = k + 2;
  for (std::size_t i = 0; i < nodes; ++i) {
    Weight load = 0;
    if (i == 0) {
      load = scale;
    } else if (i + 1 == nodes) {
      load = scale / 4;
    }
    instance.machines.push_back(MachineSpec{"m" + std::to_string(i + 1), load});
  }
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    instance.jobs.push_back(make_job(i + 1, rock, {i, i + 1}));
  }
  return instance;
}

} // namespace gbl

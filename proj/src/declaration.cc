/*******************************************************************************
 * @file:   declaration.cc
 ******************************************************************************/
#include "gbl/declaration.h"

#include <algorithm>
#include <array>

namespace gbl {

using json = nlohmann::ordered_json;

namespace {
constexpr std::array<const char *, 5> kKindNames = {
    "dedicated_overflow", "multi_cycle_component", "hall_violation", "activated_set", "preflow_height",
};

json machine_ids(const Instance &instance, const std::vector<MachineIndex> &machines) {
  json out = json::array();
  for (const MachineIndex m : machines) {
    out.push_back(instance.machines.at(m).id);
  }
  return out;
}

json job_ids(const Instance &instance, const std::vector<JobIndex> &jobs) {
  json out = json::array();
  for (const JobIndex j : jobs) {
    out.push_back(instance.jobs.at(j).id);
  }
  return out;
}

// Per-machine values as an object keyed by machine id.
template <typename T> json per_machine(const Instance &instance, const std::vector<T> &values) {
  json out = json::object();
  for (MachineIndex m = 0; m < values.size(); ++m) {
    out[instance.machines.at(m).id] = values[m];
  }
  return out;
}

struct Reader {
  const Instance &instance;

  const json &field(const json &object, const char *key) const {
    if (!object.is_object() || !object.contains(key)) {
      throw InputError(std::string("declaration payload is missing '") + key + "'");
    }
    return object.at(key);
  }

  Weight integer(const json &value, const char *what) const {
    if (!value.is_number_integer()) {
      throw InputError(std::string("declaration field '") + what + "' must be an integer");
    }
    return value.get<Weight>();
  }

  MachineIndex machine(const json &value) const {
    if (!value.is_string()) {
      throw InputError("machine reference must be a string id");
    }
    const auto found = instance.find_machine(value.get<std::string>());
    if (!found) {
      throw InputError("declaration references unknown machine '" + value.get<std::string>() + "'");
    }
    return *found;
  }

  JobIndex job(const json &value) const {
    if (!value.is_string()) {
      throw InputError("job reference must be a string id");
    }
    const auto found = instance.find_job(value.get<std::string>());
    if (!found) {
      throw InputError("declaration references unknown job '" + value.get<std::string>() + "'");
    }
    return *found;
  }

  std::vector<MachineIndex> machines(const json &value) const {
    if (!value.is_array()) {
      throw InputError("expected an array of machine ids");
    }
    std::vector<MachineIndex> out;
    for (const json &item : value) {
      out.push_back(machine(item));
    }
    return out;
  }

  std::vector<JobIndex> jobs(const json &value) const {
    if (!value.is_array()) {
      throw InputError("expected an array of job ids");
    }
    std::vector<JobIndex> out;
    for (const json &item : value) {
      out.push_back(job(item));
    }
    return out;
  }

  template <typename T> std::vector<T> per_machine(const json &value, const char *what) const {
    if (!value.is_object()) {
      throw InputError(std::string("declaration field '") + what + "' must map machine ids to integers");
    }
    std::vector<T> out(instance.machines.size(), 0);
    std::vector<bool> seen(instance.machines.size(), false);
    for (const auto &[key, item] : value.items()) {
      const MachineIndex m = machine(json(key));
      out[m] = static_cast<T>(integer(item, what));
      seen[m] = true;
    }
    for (const bool present : seen) {
      if (!present) {
        throw InputError(std::string("declaration field '") + what + "' does not cover every machine");
      }
    }
    return out;
  }
};

json pebble_to_json(const PlacedPebble &pebble, const Instance &instance) {
  json out = json::object();
  out["weight"] = pebble.weight;
  out["eligible"] = machine_ids(instance, pebble.eligible);
  out["at"] = instance.machines.at(pebble.at).id;
  if (pebble.job) {
    out["job"] = instance.jobs.at(*pebble.job).id;
  }
  if (pebble.pair) {
    out["pair"] = job_ids(instance, {pebble.pair->first, pebble.pair->second});
  }
  return out;
}

PlacedPebble pebble_from_json(const json &value, const Reader &reader) {
  PlacedPebble pebble;
  pebble.weight = reader.integer(reader.field(value, "weight"), "weight");
  pebble.eligible = reader.machines(reader.field(value, "eligible"));
  pebble.at = reader.machine(reader.field(value, "at"));
  if (value.contains("job")) {
    pebble.job = reader.job(value.at("job"));
  }
  if (value.contains("pair")) {
    const std::vector<JobIndex> pair = reader.jobs(value.at("pair"));
    if (pair.size() != 2) {
      throw InputError("pebble pair must name exactly two rocks");
    }
    pebble.pair = std::make_pair(pair[0], pair[1]);
  }
  return pebble;
}
} // namespace

const char *to_string(DeclarationKind kind) {
  return kKindNames.at(static_cast<std::size_t>(kind));
}

json declaration_to_json(const Declaration &declaration, const Instance &instance) {
  json payload = json::object();
  std::visit(
      [&](const auto &witness) {
        using T = std::decay_t<decltype(witness)>;
        if constexpr (std::is_same_v<T, OverflowWitness>) {
          payload["machine"] = instance.machines.at(witness.machine).id;
          payload["load"] = witness.load;
          payload["after_reduction"] = witness.after_reduction;
        } else if constexpr (std::is_same_v<T, MultiCycleWitness>) {
          payload["nodes"] = machine_ids(instance, witness.nodes);
          payload["rocks"] = job_ids(instance, witness.rocks);
        } else if constexpr (std::is_same_v<T, HallWitness>) {
          payload["jobs"] = job_ids(instance, witness.jobs);
          payload["neighborhood"] = machine_ids(instance, witness.neighborhood);
          payload["dl"] = per_machine(instance, witness.dl);
        } else if constexpr (std::is_same_v<T, ActivatedSetWitness>) {
          payload["mode"] = to_string(witness.mode);
          json levels = json::object();
          for (std::size_t i = 0; i < witness.activated.size(); ++i) {
            levels[instance.machines.at(witness.activated[i]).id] = witness.levels[i];
          }
          payload["levels"] = levels;
          payload["conflict"] = machine_ids(instance, witness.conflict);
          payload["system_status"] = witness.system_status;
          payload["dl"] = per_machine(instance, witness.dl);
          payload["pl"] = per_machine(instance, witness.pl);
          json pebbles = json::array();
          for (const PlacedPebble &pebble : witness.pebbles) {
            pebbles.push_back(pebble_to_json(pebble, instance));
          }
          payload["pebbles"] = pebbles;
          payload["min_rock_load"] = witness.min_rock_load ? json(*witness.min_rock_load) : json(nullptr);
        } else {
          payload["cut"] = machine_ids(instance, witness.cut);
          payload["captive"] = job_ids(instance, witness.captive);
          payload["dl"] = per_machine(instance, witness.dl);
          payload["heights"] = per_machine(instance, witness.heights);
        }
      },
      declaration.payload
  );
  json out = json::object();
  out["t"] = declaration.t;
  out["mode"] = to_string(declaration.mode);
  if (declaration.beta) {
    out["beta"] = declaration.beta->to_string();
  }
  out["kind"] = to_string(declaration.kind());
  out["payload"] = payload;
  return out;
}

Declaration declaration_from_json(const json &value, const Instance &instance) {
  const Reader reader{instance};
  Declaration declaration;
  declaration.t = reader.integer(reader.field(value, "t"), "t");
  const json &mode = reader.field(value, "mode");
  if (mode == "two_valued") {
    declaration.mode = SolveMode::kTwoValued;
  } else if (mode == "general") {
    declaration.mode = SolveMode::kGeneral;
  } else {
    throw InputError("declaration mode must be two_valued or general");
  }
  if (value.contains("beta")) {
    if (!value.at("beta").is_string()) {
      throw InputError("declaration beta must be a \"p/q\" string");
    }
    declaration.beta = Rational::parse(value.at("beta").get<std::string>());
  }
  const json &kind_value = reader.field(value, "kind");
  if (!kind_value.is_string()) {
    throw InputError("declaration kind must be a string");
  }
  const std::string kind = kind_value.get<std::string>();
  const json &payload = reader.field(value, "payload");

  if (kind == "dedicated_overflow") {
    OverflowWitness witness;
    witness.machine = reader.machine(reader.field(payload, "machine"));
    witness.load = reader.integer(reader.field(payload, "load"), "load");
    const json &after = reader.field(payload, "after_reduction");
    if (!after.is_boolean()) {
      throw InputError("declaration field 'after_reduction' must be a boolean");
    }
    witness.after_reduction = after.get<bool>();
    declaration.payload = witness;
  } else if (kind == "multi_cycle_component") {
    MultiCycleWitness witness;
    witness.nodes = reader.machines(reader.field(payload, "nodes"));
    witness.rocks = reader.jobs(reader.field(payload, "rocks"));
    declaration.payload = witness;
  } else if (kind == "hall_violation") {
    HallWitness witness;
    witness.jobs = reader.jobs(reader.field(payload, "jobs"));
    witness.neighborhood = reader.machines(reader.field(payload, "neighborhood"));
    witness.dl = reader.per_machine<Weight>(reader.field(payload, "dl"), "dl");
    declaration.payload = witness;
  } else if (kind == "activated_set") {
    ActivatedSetWitness witness;
    const json &witness_mode = reader.field(payload, "mode");
    if (witness_mode == "two_valued") {
      witness.mode = SolveMode::kTwoValued;
    } else if (witness_mode == "general") {
      witness.mode = SolveMode::kGeneral;
    } else {
      throw InputError("activated_set mode must be two_valued or general");
    }
    const json &levels = reader.field(payload, "levels");
    if (!levels.is_object()) {
      throw InputError("declaration field 'levels' must map machine ids to levels");
    }
    std::vector<std::pair<MachineIndex, Level>> entries;
    for (const auto &[key, item] : levels.items()) {
      entries.emplace_back(reader.machine(json(key)), static_cast<Level>(reader.integer(item, "levels")));
    }
    std::sort(entries.begin(), entries.end());
    for (const auto &[m, level] : entries) {
      witness.activated.push_back(m);
      witness.levels.push_back(level);
    }
    witness.conflict = reader.machines(reader.field(payload, "conflict"));
    const json &status = reader.field(payload, "system_status");
    if (!status.is_array()) {
      throw InputError("declaration field 'system_status' must be an array");
    }
    for (const json &item : status) {
      witness.system_status.push_back(item.get<std::string>());
    }
    witness.dl = reader.per_machine<Weight>(reader.field(payload, "dl"), "dl");
    witness.pl = reader.per_machine<Weight>(reader.field(payload, "pl"), "pl");
    const json &pebbles = reader.field(payload, "pebbles");
    if (!pebbles.is_array()) {
      throw InputError("declaration field 'pebbles' must be an array");
    }
    for (const json &item : pebbles) {
      witness.pebbles.push_back(pebble_from_json(item, reader));
    }
    const json &rock_load = reader.field(payload, "min_rock_load");
    if (!rock_load.is_null()) {
      witness.min_rock_load = reader.integer(rock_load, "min_rock_load");
    }
    declaration.payload = witness;
  } else if (kind == "preflow_height") {
    PreflowWitness witness;
    witness.cut = reader.machines(reader.field(payload, "cut"));
    witness.captive = reader.jobs(reader.field(payload, "captive"));
    witness.dl = reader.per_machine<Weight>(reader.field(payload, "dl"), "dl");
    witness.heights = reader.per_machine<std::uint32_t>(reader.field(payload, "heights"), "heights");
    declaration.payload = witness;
  } else {
    throw InputError("unknown declaration kind '" + kind + "'");
  }
  return declaration;
}

} // namespace gbl

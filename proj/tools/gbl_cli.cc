/*******************************************************************************
 * Command-line front end: solve, generate, verify, oracle and bench.
 *
 * @file:   gbl_cli.cc
 ******************************************************************************/
#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbl/oracle.h"
#include "gbl/search_driver.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kInput = 1, kInvariant = 2 };

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw gbl::InputError("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw gbl::InputError("cannot write " + path);
  }
  out << text;
}

std::optional<gbl::Rational> parse_beta(const std::string &text) {
  if (text.empty()) {
    return std::nullopt;
  }
  return gbl::Rational::parse(text);
}

gbl::ModeHint resolve_mode(const std::string &text, const gbl::Instance &instance) {
  return text.empty() ? instance.mode_hint : gbl::parse_mode_hint(text);
}

ordered_json parse_json(const std::string &text, const std::string &what) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error &error) {
    throw gbl::InputError(what + ": " + error.what());
  }
}

gbl::JobAssignment assignment_from_json(const ordered_json &doc, const gbl::Instance &instance) {
  const auto it = doc.find("assignment");
  if (it == doc.end() || !it->is_object()) {
    throw gbl::InputError("solution has no assignment object");
  }
  constexpr auto kUnset = static_cast<gbl::MachineIndex>(-1);
  gbl::JobAssignment assignment(instance.jobs.size(), kUnset);
  for (const auto &[job_id, machine_id] : it->items()) {
    const auto job = instance.find_job(job_id);
    if (!job || !machine_id.is_string()) {
      throw gbl::InputError("assignment entry '" + job_id + "' does not name a job and a machine");
    }
    const auto machine = instance.find_machine(machine_id.get<std::string>());
    if (!machine) {
      throw gbl::InputError("assignment names unknown machine '" + machine_id.get<std::string>() + "'");
    }
    assignment[*job] = *machine;
  }
  if (std::find(assignment.begin(), assignment.end(), kUnset) != assignment.end()) {
    throw gbl::InputError("assignment misses a job");
  }
  return assignment;
}

// Returns an empty string when the declaration holds up.
std::string check_declaration(const gbl::Instance &instance, const gbl::Declaration &declaration) {
  const gbl::CertificateCheck check = gbl::verify_certificate(instance, declaration);
  if (check.verdict == gbl::Verdict::kConfirmed) {
    return {};
  }
  if (check.verdict == gbl::Verdict::kRefuted) {
    return check.reason;
  }
  try {
    return gbl::feasible_at(instance, declaration.t, {}) ? "an assignment of makespan <= t exists" : "";
  } catch (const gbl::BudgetExceeded &) {
    std::cerr << "note: declaration at t=" << declaration.t << " left unverified (instance beyond oracle budget)\n";
    return {};
  }
}

//
// Subcommands
//

struct SolveArgs {
  std::string file;
  std::string mode;
  std::string beta;
  std::string trace;
  std::string out;
};

int run_solve(const SolveArgs &args) {
  const gbl::Instance instance = gbl::load_instance(args.file);
  std::ofstream trace_file;
  std::unique_ptr<gbl::JsonLinesTrace> trace;
  gbl::CoreHooks hooks;
  if (!args.trace.empty()) {
    trace_file.open(args.trace);
    if (!trace_file) {
      throw gbl::InputError("cannot write " + args.trace);
    }
    trace = std::make_unique<gbl::JsonLinesTrace>(trace_file);
    hooks.trace = trace.get();
  }
  const gbl::Solution solution =
      gbl::solve(instance, resolve_mode(args.mode, instance), parse_beta(args.beta), hooks);

  const gbl::SolutionCheck check = gbl::verify_solution(instance, solution.assignment);
  if (!check.valid || check.makespan != solution.makespan) {
    throw gbl::InvariantViolation("solver output failed verification: " + check.reason);
  }
  for (const gbl::Declaration &declaration : solution.declarations) {
    const std::string problem = check_declaration(instance, declaration);
    if (!problem.empty()) {
      throw gbl::InvariantViolation("declaration at t=" + std::to_string(declaration.t) + " refuted: " + problem);
    }
  }
  write_text(args.out, gbl::solution_to_json(solution, instance).dump(2) + "\n");
  return kOk;
}

int run_verify(const std::string &instance_path, const std::string &document_path) {
  const gbl::Instance instance = gbl::load_instance(instance_path);
  const ordered_json doc = parse_json(read_text(document_path), document_path);
  if (doc.contains("kind")) {
    const gbl::Declaration declaration = gbl::declaration_from_json(doc, instance);
    const std::string problem = check_declaration(instance, declaration);
    if (!problem.empty()) {
      std::cout << "refuted: " << problem << "\n";
      return kInput;
    }
    std::cout << "confirmed: OPT >= " << declaration.t + 1 << "\n";
    return kOk;
  }
  const gbl::SolutionCheck check = gbl::verify_solution(instance, assignment_from_json(doc, instance));
  if (!check.valid) {
    std::cout << "invalid: " << check.reason << "\n";
    return kInput;
  }
  if (doc.contains("makespan") && doc["makespan"] != check.makespan) {
    std::cout << "invalid: stored makespan " << doc["makespan"].dump() << " but recomputed " << check.makespan << "\n";
    return kInput;
  }
  std::cout << "valid: makespan " << check.makespan << "\n";
  return kOk;
}

int run_oracle(const std::string &path, std::optional<gbl::Weight> t) {
  const gbl::Instance instance = gbl::load_instance(path);
  ordered_json out;
  if (t) {
    out["t"] = *t;
    out["feasible"] = gbl::feasible_at(instance, *t);
  } else {
    out["opt"] = gbl::exact_opt(instance);
  }
  std::cout << out.dump() << "\n";
  return kOk;
}

struct BenchRow {
  std::string line;
  bool failed = false;
};

BenchRow bench_one(const fs::path &path, const std::optional<gbl::Rational> &beta) {
  BenchRow row;
  const std::string name = path.filename().string();
  try {
    const gbl::Instance instance = gbl::load_instance(path);
    const auto start = std::chrono::steady_clock::now();
    const gbl::Solution solution = gbl::solve(instance, instance.mode_hint, beta);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << name << ',' << solution.makespan << ',' << solution.t_star << ',' << solution.lower_bound << ','
         << solution.ratio_certified.to_string() << ',' << solution.stats.core_invocations << ','
         << solution.stats.pushes << ',' << ms;
    row.line = line.str();
  } catch (const std::exception &error) {
    std::cerr << name << ": " << error.what() << "\n";
    row.line = name + ",error,,,,,,";
    row.failed = true;
  }
  return row;
}

int run_bench(const std::string &dir, std::size_t jobs, const std::string &beta_text, const std::string &out) {
  const std::optional<gbl::Rational> beta = parse_beta(beta_text);
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto &entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw gbl::InputError("cannot list " + dir + ": " + ec.message());
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      rows[i] = bench_one(files[i], beta);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < std::max<std::size_t>(jobs, 1); ++k) {
    pool.emplace_back(worker);
  }
  for (std::thread &thread : pool) {
    thread.join();
  }

  std::string csv = "instance,makespan,t_star,lower_bound,ratio,cores,pushes,ms\n";
  bool failed = false;
  for (const BenchRow &row : rows) {
    csv += row.line + "\n";
    failed = failed || row.failed;
  }
  write_text(out, csv);
  return failed ? kInvariant : kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Makespan minimisation for graph balancing with light hyper edges"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App *solve = app.add_subcommand("solve", "Solve an instance and print the solution JSON");
  solve->add_option("file", solve_args.file, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--mode", solve_args.mode, "auto, two-valued or general (default: the instance's mode_hint)");
  solve->add_option("--beta", solve_args.beta, "Heavy-job threshold as p/q, required in general mode");
  solve->add_option("--trace", solve_args.trace, "Write JSON-lines core events here");
  solve->add_option("--out", solve_args.out, "Output file (default stdout)");

  CLI::App *generate = app.add_subcommand("generate", "Write a seeded random instance");
  generate->require_subcommand(1);
  std::uint64_t seed = 0;
  std::string generate_out;
  gbl::TwoValuedParams tv;
  CLI::App *gen_tv = generate->add_subcommand("two-valued", "Two job weights w < W");
  gen_tv->add_option("--m", tv.machines)->required();
  gen_tv->add_option("--heavy", tv.heavy_jobs)->required();
  gen_tv->add_option("--light", tv.light_jobs)->required();
  gen_tv->add_option("--W", tv.heavy_weight)->required();
  gen_tv->add_option("--w", tv.light_weight)->required();
  gen_tv->add_option("--deg", tv.max_light_degree, "Largest light-job degree")->capture_default_str();
  gen_tv->add_option("--dl", tv.max_dedicated_load, "Largest dedicated load")->capture_default_str();
  gbl::GeneralParams gp;
  std::string gen_beta = "7/10";
  CLI::App *gen_general = generate->add_subcommand("general", "Heavy jobs above beta*Wmax on two machines");
  gen_general->add_option("--m", gp.machines)->required();
  gen_general->add_option("--n", gp.jobs)->required();
  gen_general->add_option("--beta", gen_beta)->capture_default_str();
  gen_general->add_option("--Wmax", gp.max_weight)->capture_default_str();
  gen_general->add_option("--dl", gp.max_dedicated_load, "Largest dedicated load")->capture_default_str();
  std::size_t path_k = 2;
  gbl::Weight path_scale = 100;
  CLI::App *gen_path = generate->add_subcommand("adversarial-path", "Rock path with loaded ends");
  gen_path->add_option("--k", path_k)->capture_default_str();
  gen_path->add_option("--scale", path_scale)->capture_default_str();
  for (CLI::App *sub : {gen_tv, gen_general, gen_path}) {
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", generate_out, "Output file (default stdout)");
  }

  std::string verify_instance;
  std::string verify_document;
  CLI::App *verify = app.add_subcommand("verify", "Check a solution or declaration against an instance");
  verify->add_option("instance", verify_instance)->required()->check(CLI::ExistingFile);
  verify->add_option("document", verify_document, "Solution or declaration JSON")->required()->check(CLI::ExistingFile);

  std::string oracle_instance;
  std::optional<gbl::Weight> oracle_t;
  CLI::App *oracle = app.add_subcommand("oracle", "Exact optimum, or feasibility at --t");
  oracle->add_option("instance", oracle_instance)->required()->check(CLI::ExistingFile);
  oracle->add_option("--t", oracle_t);

  std::string bench_dir;
  std::size_t bench_jobs = 1;
  std::string bench_beta;
  std::string bench_out;
  CLI::App *bench = app.add_subcommand("bench", "Solve every *.json in a directory and print CSV");
  bench->add_option("--dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  bench->add_option("--jobs", bench_jobs)->capture_default_str();
  bench->add_option("--beta", bench_beta, "Used for general-mode instances");
  bench->add_option("--out", bench_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &error) {
    const int code = app.exit(error);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*solve) {
      return run_solve(solve_args);
    }
    if (*generate) {
      gbl::Instance instance;
      if (*gen_tv) {
        tv.seed = seed;
        instance = gbl::generate_two_valued(tv);
      } else if (*gen_general) {
        gp.seed = seed;
        gp.beta = gbl::Rational::parse(gen_beta);
        instance = gbl::generate_general(gp);
      } else {
        instance = gbl::generate_adversarial_path(path_k, path_scale);
      }
      write_text(generate_out, gbl::serialize_instance(instance));
      return kOk;
    }
    if (*verify) {
      return run_verify(verify_instance, verify_document);
    }
    if (*oracle) {
      return run_oracle(oracle_instance, oracle_t);
    }
    return run_bench(bench_dir, bench_jobs, bench_beta, bench_out);
  } catch (const gbl::InputError &error) {
    std::cerr << "error: " << error.what() << "\n";
    return kInput;
  } catch (const gbl::BudgetExceeded &error) {
    std::cerr << "error: " << error.what() << "\n";
    return kInput;
  } catch (const gbl::InvariantViolation &error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return kInvariant;
  }
}

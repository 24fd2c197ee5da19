#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "gbl/oracle.h"
#include "gbl/random.h"
#include "gbl/search_driver.h"
#include "support/brute.h"
#include "support/builders.h"

using namespace gbl;
using gbl::testing::brute_opt;
using gbl::testing::make_instance;

namespace {

struct Sample {
  Instance instance;
  Declaration declaration;
};

// Declarations from every guess between W_max and the greedy makespan.
std::vector<Sample> collect_declarations() {
  std::vector<Sample> out;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Rng rng(seed + 300);
    Instance instance;
    ModeHint mode = ModeHint::kGeneral;
    std::optional<Rational> beta;
    if (seed % 2 == 0) {
      TwoValuedParams p;
      p.machines = rng.uniform(2, 5);
      p.heavy_jobs = rng.uniform(1, 4);
      p.light_jobs = rng.uniform(1, 6);
      p.heavy_weight = rng.uniform(2, 20);
      p.light_weight = rng.uniform(1, p.heavy_weight - 1);
      p.max_light_degree = rng.uniform(2, 4);
      p.max_dedicated_load = rng.uniform(0, p.heavy_weight);
      p.seed = seed;
      instance = generate_two_valued(p);
      mode = ModeHint::kTwoValued;
    } else {
      GeneralParams p;
      p.machines = rng.uniform(2, 6);
      p.jobs = rng.uniform(3, 10);
      p.beta = Rational(7, 10);
      p.max_weight = rng.uniform(10, 40);
      p.max_dedicated_load = rng.uniform(0, p.max_weight);
      p.seed = seed;
      instance = generate_general(p);
      beta = p.beta;
    }
    const ValidationReport report = require_valid(instance, mode, beta);
    for (Weight t = instance.max_job_weight(); t <= initial_bounds(instance).hi; ++t) {
      const GuessOutcome guess = run_guess(instance, report, t);
      if (const auto *declaration = std::get_if<Declaration>(&guess.outcome.result)) {
        out.push_back({instance, *declaration});
      }
    }
  }
  return out;
}

const std::vector<Sample> &declarations() {
  static const std::vector<Sample> samples = collect_declarations();
  return samples;
}

} // namespace

TEST_CASE("exact_opt examples") {
  const Instance shared = make_instance({3, 0}, {{5, {0, 1}}, {5, {0, 1}}});
  CHECK(exact_opt(shared) == 8);
  CHECK(feasible_at(shared, 8));
  CHECK_FALSE(feasible_at(shared, 7));
  CHECK(exact_opt(make_instance({0}, {{9, {0}}})) == 9);
  CHECK(exact_opt(make_instance({4, 6}, {})) == 6);
}

TEST_CASE("exact_opt matches exhaustive enumeration") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const std::size_t m = rng.uniform(1, 4);
    std::vector<Weight> dl(m);
    for (Weight &d : dl) {
      d = rng.uniform(0, 10);
    }
    std::vector<gbl::testing::JobRow> jobs;
    const std::size_t n = rng.uniform(0, 8);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<MachineIndex> eligible;
      for (MachineIndex v = 0; v < m; ++v) {
        if (rng.coin()) {
          eligible.push_back(v);
        }
      }
      if (eligible.empty()) {
        eligible.push_back(rng.index(m));
      }
      jobs.push_back({rng.uniform(1, 20), eligible});
    }
    const Instance instance = make_instance(dl, jobs);
    const Weight opt = exact_opt(instance);
    CAPTURE(seed);
    CHECK(opt == brute_opt(instance));
    CHECK(feasible_at(instance, opt));
    CHECK_FALSE(feasible_at(instance, opt - 1));
    CHECK(feasible_at(instance, opt + 3));
  }
}

TEST_CASE("exact_opt ignores machine order") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance instance = generate_general({5, 9, Rational(7, 10), 30, seed, 20});
    Rng rng(seed);
    std::vector<MachineIndex> perm(instance.machines.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.index(i)]);
    }
    Instance shuffled = instance;
    for (MachineIndex v = 0; v < perm.size(); ++v) {
      shuffled.machines[perm[v]] = instance.machines[v];
    }
    for (JobSpec &job : shuffled.jobs) {
      for (MachineIndex &v : job.eligible) {
        v = perm[v];
      }
      std::sort(job.eligible.begin(), job.eligible.end());
    }
    CHECK(exact_opt(shuffled) == exact_opt(instance));
  }
}

TEST_CASE("budget guard") {
  std::vector<gbl::testing::JobRow> jobs(17, {3, {0, 1}});
  const Instance wide = make_instance({0, 0}, jobs);
  CHECK_THROWS_AS(exact_opt(wide), BudgetExceeded);
  CHECK_THROWS_AS(feasible_at(wide, 30), BudgetExceeded);

  std::vector<gbl::testing::JobRow> pinned(40, {3, {0}});
  pinned.push_back({3, {0, 1}});
  CHECK(exact_opt(make_instance({0, 0}, pinned)) == 120);
}

TEST_CASE("verify_solution") {
  const Instance instance = make_instance({3, 0}, {{5, {0, 1}}, {5, {0, 1}}});
  const SolutionCheck good = verify_solution(instance, {0, 1});
  CHECK(good.valid);
  CHECK(good.makespan == 8);
  CHECK_FALSE(verify_solution(instance, {0}).valid);
  CHECK_FALSE(verify_solution(instance, {0, 1, 1}).valid);
  const Instance narrow = make_instance({0, 0}, {{5, {0}}, {5, {0, 1}}});
  const SolutionCheck wrong = verify_solution(narrow, {1, 1});
  CHECK_FALSE(wrong.valid);
  CHECK_FALSE(wrong.reason.empty());
}

TEST_CASE("multi-cycle certificate") {
  const Instance instance = make_instance(
      {0, 0, 0, 0}, {{9, {0, 1}}, {9, {1, 2}}, {9, {2, 3}}, {9, {0, 3}}, {9, {0, 2}}, {2, {0, 1, 2}}},
      ModeHint::kTwoValued
  );
  Declaration declaration{10, SolveMode::kTwoValued, std::nullopt, MultiCycleWitness{{0, 1, 2, 3}, {0, 1, 2, 3, 4}}};
  CHECK(verify_certificate(instance, declaration).verdict == Verdict::kConfirmed);
  declaration.payload = MultiCycleWitness{{0, 1, 2, 3}, {0, 1, 2, 3}};
  CHECK(verify_certificate(instance, declaration).verdict == Verdict::kRefuted);
  declaration.payload = MultiCycleWitness{{0, 1, 2, 3}, {0, 1, 2, 3, 5}};
  CHECK(verify_certificate(instance, declaration).verdict == Verdict::kRefuted);
}

TEST_CASE("overflow certificate") {
  const Instance instance = make_instance({4, 0}, {{7, {0}}, {3, {0, 1}}, {5, {0, 1}}}, ModeHint::kTwoValued);
  const Declaration declaration{10, SolveMode::kTwoValued, std::nullopt, OverflowWitness{0, 11, false}};
  CHECK(verify_certificate(instance, declaration).verdict == Verdict::kConfirmed);
  const Declaration high{11, SolveMode::kTwoValued, std::nullopt, OverflowWitness{0, 11, false}};
  CHECK(verify_certificate(instance, high).verdict == Verdict::kRefuted);
}

TEST_CASE("collected declarations are sound and round-trip") {
  std::map<DeclarationKind, std::size_t> kinds;
  for (const Sample &sample : declarations()) {
    const Declaration &declaration = sample.declaration;
    ++kinds[declaration.kind()];
    CAPTURE(declaration_to_json(declaration, sample.instance).dump());
    CHECK_FALSE(feasible_at(sample.instance, declaration.t));
    CHECK(confirm_declaration(sample.instance, declaration));
    CHECK(declaration_from_json(declaration_to_json(declaration, sample.instance), sample.instance) == declaration);
  }
  for (const auto &[kind, count] : kinds) {
    MESSAGE(std::string(to_string(kind)) << ": " << count);
  }
  CHECK(kinds.size() >= 4);
}

TEST_CASE("mutated declarations are never confirmed when feasible") {
  std::size_t mutated = 0;
  std::size_t blocked = 0;
  for (const Sample &sample : declarations()) {
    const auto *witness = std::get_if<ActivatedSetWitness>(&sample.declaration.payload);
    if (witness != nullptr) {
      for (const MachineIndex v : witness->activated) {
        if (witness->pl[v] == 0) {
          continue;
        }
        Declaration copy = sample.declaration;
        --std::get<ActivatedSetWitness>(copy.payload).pl[v];
        ++mutated;
        const Verdict verdict = verify_certificate(sample.instance, copy).verdict;
        CHECK(verdict != Verdict::kConfirmed);
      }
    }
    // The same payload claimed at a guess the instance meets.
    Declaration raised = sample.declaration;
    raised.t = exact_opt(sample.instance);
    if (const auto *overflow = std::get_if<OverflowWitness>(&raised.payload); overflow && overflow->load > raised.t) {
      continue;
    }
    ++blocked;
    CHECK(verify_certificate(sample.instance, raised).verdict != Verdict::kConfirmed);
  }
  MESSAGE(mutated << " pl mutations, " << blocked << " raised guesses");
  CHECK(mutated > 0);
  CHECK(blocked > 0);
}

TEST_CASE("malformed declaration documents") {
  const Instance instance = make_instance({0, 0}, {{5, {0, 1}}, {3, {0, 1}}});
  CHECK_THROWS_AS(
      declaration_from_json(nlohmann::ordered_json::parse(R"({"kind":"nonsense","t":4})"), instance), InputError
  );
  CHECK_THROWS_AS(
      declaration_from_json(
          nlohmann::ordered_json::parse(R"({"kind":"hall_violation","t":4,"mode":"two_valued","jobs":["j9"]})"),
          instance
      ),
      InputError
  );
}

#include <doctest.h>

#include <json.hpp>

#include "gbl/oracle.h"
#include "gbl/preprocess.h"
#include "gbl/random.h"
#include "gbl/search_driver.h"
#include "support/brute.h"
#include "support/builders.h"

using namespace gbl;
using gbl::testing::make_instance;
using gbl::testing::reduced;

namespace {
std::vector<bool> mask_of(std::size_t n, std::initializer_list<MachineIndex> members) {
  std::vector<bool> mask(n, false);
  for (const MachineIndex v : members) {
    mask[v] = true;
  }
  return mask;
}
} // namespace

TEST_CASE("classify_jobs two-valued") {
  const Instance instance = make_instance({0, 0, 0}, {{10, {0, 1}}, {3, {0, 1, 2}}});
  JobClasses at15 = classify_jobs(instance, 15, SolveMode::kTwoValued, std::nullopt);
  CHECK(at15.rocks == std::vector<JobIndex>{0});
  CHECK(at15.pebbles == std::vector<JobIndex>{1});
  JobClasses at20 = classify_jobs(instance, 20, SolveMode::kTwoValued, std::nullopt);
  CHECK(at20.rocks.empty());
  CHECK(at20.pebbles.size() == 2);
}

TEST_CASE("classify_jobs general at the beta boundary") {
  const Instance instance = make_instance({0, 0, 0}, {{71, {0, 1}}, {70, {0, 1, 2}}, {100, {1, 2}}});
  const JobClasses classes = classify_jobs(instance, 100, SolveMode::kGeneral, Rational(7, 10));
  CHECK(classes.rocks == std::vector<JobIndex>{0, 2});
  CHECK(classes.pebbles == std::vector<JobIndex>{1});
  CHECK_THROWS_AS(classify_jobs(instance, 100, SolveMode::kGeneral, Rational(1, 2)), InputError);
  CHECK_THROWS_AS(classify_jobs(instance, 100, SolveMode::kGeneral, std::nullopt), InputError);
}

TEST_CASE("single-machine jobs fold into the dedicated load") {
  const Instance instance = make_instance({2, 0}, {{5, {0}}, {3, {0, 1}}, {4, {1}}});
  const GuessContext ctx = reduced(instance, 8, SolveMode::kGeneral, Rational(7, 10));
  CHECK(ctx.dl == std::vector<Weight>{7, 4});
  CHECK(ctx.forced[0] == MachineIndex{0});
  CHECK(ctx.forced[2] == MachineIndex{1});
  CHECK_FALSE(ctx.forced[1].has_value());
  REQUIRE(ctx.pebbles.size() == 1);
  CHECK(ctx.pebbles[0].job == JobIndex{1});
}

TEST_CASE("dedicated overflow declares before classification") {
  const Instance instance = make_instance({6, 0}, {{5, {0}}, {3, {0, 1}}});
  const ReduceResult result = reduce(instance, 10, SolveMode::kGeneral, Rational(7, 10));
  REQUIRE(std::holds_alternative<Declaration>(result));
  const Declaration &declaration = std::get<Declaration>(result);
  REQUIRE(declaration.kind() == DeclarationKind::kDedicatedOverflow);
  const auto &witness = std::get<OverflowWitness>(declaration.payload);
  CHECK(witness.machine == 0);
  CHECK(witness.load == 11);
  CHECK_FALSE(witness.after_reduction);
}

TEST_CASE("parallel rocks merge into a difference pebble") {
  const Instance instance = make_instance({0, 0}, {{7, {0, 1}}, {5, {1, 0}}});
  const GuessContext ctx = reduced(instance, 7, SolveMode::kGeneral, Rational(7, 10));
  CHECK(ctx.dl == std::vector<Weight>{5, 5});
  CHECK(ctx.rocks.edge_count() == 0);
  REQUIRE(ctx.pebbles.size() == 1);
  const Pebble &pebble = ctx.pebbles[0];
  CHECK(pebble.weight == 2);
  CHECK(pebble.eligible == std::vector<MachineIndex>{0, 1});
  CHECK_FALSE(pebble.job.has_value());
  CHECK(pebble.pair == std::make_pair(JobIndex{0}, JobIndex{1}));
  REQUIRE(ctx.log.size() == 1);
  CHECK(ctx.log[0].kind == ReductionStep::Kind::kMergeParallel);

  // Placing the pebble on m2 sends the heavy rock there and the light one to m1.
  const JobAssignment assignment = assemble_assignment(ctx, 2, {1}, {});
  CHECK(assignment == JobAssignment{1, 0});
  CHECK(machine_loads(instance, assignment) == std::vector<Weight>{5, 7});
}

TEST_CASE("equal parallel rocks are dropped") {
  const Instance instance = make_instance({0, 0}, {{6, {0, 1}}, {6, {0, 1}}, {2, {0, 1}}});
  const GuessContext ctx = reduced(instance, 10, SolveMode::kTwoValued);
  CHECK(ctx.dl == std::vector<Weight>{6, 6});
  CHECK(ctx.pebbles.size() == 1);
  REQUIRE(ctx.log.size() == 1);
  CHECK(ctx.log[0].kind == ReductionStep::Kind::kDropEmptyPebble);
  CHECK(ctx.forced[0] == MachineIndex{0});
  CHECK(ctx.forced[1] == MachineIndex{1});
}

TEST_CASE("two cycles in one component declare") {
  // a b c d = 0 1 2 3; rocks ab bc ca cd db
  const Instance instance =
      make_instance({0, 0, 0, 0}, {{10, {0, 1}}, {10, {1, 2}}, {10, {2, 0}}, {10, {2, 3}}, {10, {3, 1}}, {3, {0, 1}}});
  const ReduceResult result = reduce(instance, 15, SolveMode::kTwoValued, std::nullopt);
  REQUIRE(std::holds_alternative<Declaration>(result));
  const auto &witness = std::get<MultiCycleWitness>(std::get<Declaration>(result).payload);
  CHECK(witness.nodes.size() == 4);
  CHECK(witness.rocks.size() == 5);
  CHECK(verify_certificate(instance, std::get<Declaration>(result)).verdict == Verdict::kConfirmed);
}

TEST_CASE("pendant tree of a cycle folds toward the leaf") {
  const Instance instance = make_instance({0, 0, 0, 0}, {{6, {0, 1}}, {6, {1, 2}}, {6, {2, 0}}, {6, {2, 3}}});
  const GuessContext ctx = reduced(instance, 10, SolveMode::kGeneral, Rational(4, 7));
  CHECK(ctx.dl == std::vector<Weight>{0, 0, 0, 6});
  CHECK(ctx.forced[3] == MachineIndex{3});
  CHECK(ctx.rocks.edge_count() == 3);
  CHECK(ctx.rocks.system_of(3) != ctx.rocks.system_of(0));
  CHECK(ctx.rocks.systems()[ctx.rocks.system_of(3)].kind == SystemKind::kIsolated);
  CHECK(ctx.rocks.systems()[ctx.rocks.system_of(0)].kind == SystemKind::kCycle);
  CHECK(ctx.rocks.is_reduced());
}

TEST_CASE("pendant folding can overflow after reduction") {
  const Instance instance = make_instance({0, 0, 0, 5}, {{6, {0, 1}}, {6, {1, 2}}, {6, {2, 0}}, {6, {2, 3}}});
  const ReduceResult result = reduce(instance, 10, SolveMode::kGeneral, Rational(4, 7));
  REQUIRE(std::holds_alternative<Declaration>(result));
  const auto &witness = std::get<OverflowWitness>(std::get<Declaration>(result).payload);
  CHECK(witness.after_reduction);
  CHECK(witness.machine == 3);
  CHECK(witness.load == 11);
  CHECK(verify_certificate(instance, std::get<Declaration>(result)).verdict == Verdict::kConfirmed);
}

TEST_CASE("rock graph classification") {
  const RockGraph tree(4, {{0, 0, 1, 5}, {1, 1, 2, 5}});
  CHECK(tree.systems().size() == 2);
  CHECK(tree.systems()[tree.system_of(0)].kind == SystemKind::kTree);
  CHECK(tree.systems()[tree.system_of(3)].kind == SystemKind::kIsolated);
  const RockGraph unicyclic(4, {{0, 0, 1, 5}, {1, 1, 2, 5}, {2, 0, 2, 5}, {3, 2, 3, 5}});
  CHECK(unicyclic.systems()[0].kind == SystemKind::kUnicyclic);
  CHECK_FALSE(unicyclic.is_reduced());
  const RockGraph two_cycle(2, {{0, 0, 1, 5}, {1, 0, 1, 5}});
  CHECK(two_cycle.systems()[0].kind == SystemKind::kCycle);
  CHECK_FALSE(two_cycle.is_reduced());
  CHECK_THROWS_AS(RockGraph(2, {{0, 0, 2, 5}}), std::invalid_argument);
}

TEST_CASE("min_rock_load_into examples") {
  const RockGraph path(3, {{0, 0, 1, 5}, {1, 1, 2, 5}});
  CHECK(min_rock_load_into(path, mask_of(3, {1})) == RockLoad::of(0));
  CHECK(min_rock_load_into(path, mask_of(3, {0, 1, 2})) == RockLoad::of(10));

  const RockGraph triangle(3, {{0, 0, 1, 5}, {1, 1, 2, 5}, {2, 0, 2, 5}});
  for (MachineIndex v = 0; v < 3; ++v) {
    CHECK(min_rock_load_into(triangle, mask_of(3, {v})) == RockLoad::of(5));
  }

  const RockGraph star(4, {{0, 0, 1, 4}, {1, 0, 2, 5}, {2, 0, 3, 6}});
  CHECK(min_rock_load_into(star, mask_of(4, {0})) == RockLoad::of(0));
  // The centre takes the 6-edge; the leaves must take the other two.
  CHECK(min_rock_load_into(star, mask_of(4, {1, 2, 3})) == RockLoad::of(9));

  const RockGraph overfull(3, {{0, 0, 1, 4}, {1, 1, 2, 4}, {2, 0, 2, 4}, {3, 0, 1, 4}});
  CHECK_FALSE(min_rock_load_into(overfull, mask_of(3, {0})).reachable);
  CHECK_THROWS_AS(min_rock_load_into(path, mask_of(2, {0})), std::invalid_argument);
}

TEST_CASE("min_rock_load_into matches enumeration on random graphs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const std::size_t n = rng.uniform(1, 9);
    std::vector<Rock> rocks;
    for (std::size_t v = 1; v < n; ++v) {
      if (rng.uniform(0, 3) > 0) {
        const std::size_t u = rng.index(v);
        rocks.push_back(Rock{rocks.size(), u, v, rng.uniform(1, 20)});
      }
    }
    if (n >= 3 && rng.coin()) {
      const std::size_t a = rng.index(n);
      const std::size_t b = rng.index(n);
      if (a != b) {
        rocks.push_back(Rock{rocks.size(), std::min(a, b), std::max(a, b), rng.uniform(1, 20)});
      }
    }
    const RockGraph graph(n, rocks);
    std::vector<bool> subset(n);
    for (std::size_t v = 0; v < n; ++v) {
      subset[v] = rng.coin();
    }
    const auto expected = testing::brute_min_rock_load(graph, subset);
    const RockLoad got = min_rock_load_into(graph, subset);
    CAPTURE(seed);
    CHECK(got.reachable == expected.has_value());
    if (expected) {
      CHECK(got.value == *expected);
    }
  }
}

TEST_CASE("reduce leaves a reduced graph and is idempotent") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const bool general = seed % 2 == 0;
    const Instance instance = general ? generate_general({5, 10, Rational(7, 10), 40, seed, 15})
                                      : generate_two_valued({5, 5, 5, 9, 4, 3, seed, 6});
    const SolveMode mode = general ? SolveMode::kGeneral : SolveMode::kTwoValued;
    const std::optional<Rational> beta = general ? std::optional(Rational(7, 10)) : std::nullopt;
    const SearchBounds bounds = initial_bounds(instance);
    for (Weight t = bounds.lo; t <= bounds.hi; ++t) {
      const ReduceResult first = reduce(instance, t, mode, beta);
      const auto *ctx = std::get_if<GuessContext>(&first);
      if (ctx == nullptr) {
        continue;
      }
      CAPTURE(seed);
      CAPTURE(t);
      CHECK(ctx->rocks.is_reduced());
      for (const Pebble &pebble : ctx->pebbles) {
        CHECK(pebble.eligible.size() >= 2);
      }
      for (const Weight d : ctx->dl) {
        CHECK(d <= t);
      }
      const Instance again = to_instance(*ctx, instance);
      const ReduceResult second = reduce(again, t, mode, beta);
      REQUIRE(std::holds_alternative<GuessContext>(second));
      const GuessContext &ctx2 = std::get<GuessContext>(second);
      CHECK(ctx2.log.empty());
      CHECK(ctx2.dl == ctx->dl);
      CHECK(ctx2.pebbles.size() == ctx->pebbles.size());
      CHECK(ctx2.rocks.edge_count() == ctx->rocks.edge_count());
    }
  }
}

TEST_CASE("reductions preserve feasibility") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance instance = seed % 2 == 0 ? generate_general({4, 8, Rational(2, 3), 30, seed, 20})
                                            : generate_two_valued({4, 4, 4, 11, 4, 3, seed, 8});
    const SolveMode mode = seed % 2 == 0 ? SolveMode::kGeneral : SolveMode::kTwoValued;
    const std::optional<Rational> beta = seed % 2 == 0 ? std::optional(Rational(2, 3)) : std::nullopt;
    const SearchBounds bounds = initial_bounds(instance);
    for (Weight t = bounds.lo; t <= bounds.hi; ++t) {
      const ReduceResult result = reduce(instance, t, mode, beta);
      const auto *ctx = std::get_if<GuessContext>(&result);
      const bool reduced_feasible = ctx != nullptr && feasible_at(to_instance(*ctx, instance), t);
      CAPTURE(seed);
      CAPTURE(t);
      CHECK(reduced_feasible == feasible_at(instance, t));
    }
  }
}

TEST_CASE("reduction log serialises one step per line") {
  const Instance instance = make_instance({0, 0, 0}, {{7, {0, 1}}, {5, {0, 1}}, {2, {2}}});
  const GuessContext ctx = reduced(instance, 7, SolveMode::kGeneral, Rational(7, 10));
  const std::string text = reduction_log_json_lines(ctx, instance);
  std::istringstream lines(text);
  std::string line;
  std::vector<nlohmann::json> parsed;
  while (std::getline(lines, line)) {
    parsed.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["step"] == "fold_single");
  CHECK(parsed[0]["jobs"] == nlohmann::json::array({"j3"}));
  CHECK(parsed[1]["step"] == "merge_parallel");
  CHECK(parsed[1]["machines"] == nlohmann::json::array({"m1", "m2"}));
  CHECK(parsed[1]["weight"] == 2);
}

TEST_CASE("assemble_assignment rejects gaps") {
  const Instance instance = make_instance({0, 0}, {{3, {0, 1}}, {2, {0, 1}}});
  const GuessContext ctx = reduced(instance, 5, SolveMode::kGeneral, Rational(7, 10));
  CHECK(assemble_assignment(ctx, 2, {1, 0}, {}) == JobAssignment{1, 0});
  CHECK_THROWS_AS(assemble_assignment(ctx, 3, {1, 0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(assemble_assignment(ctx, 2, {1}, {}), std::out_of_range);
}

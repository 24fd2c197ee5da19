/*******************************************************************************
 * Exact reference solver and independent checkers for solutions and
 * declarations. Intended for small instances only.
 *
 * @file:   oracle.h
 ******************************************************************************/
#pragma once

#include <chrono>
#include <string>

#include "gbl/declaration.h"
#include "gbl/instance.h"
#include "gbl/rational.h"

namespace gbl {

struct OracleBudget {
  std::size_t max_jobs = 16; // multi-machine jobs
  std::chrono::milliseconds wall{30000};
};

// Minimum makespan by branch and bound. Throws BudgetExceeded.
Weight exact_opt(const Instance &instance, const OracleBudget &budget = {});

// True iff some assignment has makespan <= t. Throws BudgetExceeded.
bool feasible_at(const Instance &instance, Weight t, const OracleBudget &budget = {});

enum class Verdict { kConfirmed, kRefuted, kNeedsExhaustive };

const char *to_string(Verdict verdict);

struct CertificateCheck {
  Verdict verdict = Verdict::kRefuted;
  std::string reason;
};

// Checks a declaration without solving the instance. `beta` is needed for
// general-mode declarations that depend on the rock split.
CertificateCheck verify_certificate(
    const Instance &instance,
    const Declaration &declaration,
    const std::optional<Rational> &beta = std::nullopt
);

// verify_certificate, falling back to feasible_at for needs_exhaustive.
bool confirm_declaration(
    const Instance &instance,
    const Declaration &declaration,
    const std::optional<Rational> &beta = std::nullopt,
    const OracleBudget &budget = {}
);

struct SolutionCheck {
  bool valid = false;
  Weight makespan = 0;
  std::string reason;
};

// Every job must sit on one of its eligible machines.
SolutionCheck verify_solution(const Instance &instance, const JobAssignment &assignment);

} // namespace gbl

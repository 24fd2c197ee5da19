/*******************************************************************************
 * Fallback core for large guesses: a push-relabel flow of job weight into
 * machine capacity t - dl. A saturating flow is rounded to an assignment of
 * makespan at most t + W - 1; otherwise the minimum cut is a machine set
 * whose captive jobs overfill it.
 *
 * @file:   relief_core.h
 ******************************************************************************/
#pragma once

#include "gbl/core.h"

namespace gbl {

struct ReliefStats {
  std::size_t operations = 0; // pushes plus relabels
  std::size_t cancelled_cycles = 0;
};

CoreOutcome run_preflow_core(const Instance &instance, const GuessContext &ctx, ReliefStats *stats = nullptr);

} // namespace gbl

/*******************************************************************************
 * Exact decision for guesses where no two movable jobs fit on one machine:
 * bipartite matching between jobs and the machines they fit on.
 *
 * @file:   matching_core.h
 ******************************************************************************/
#pragma once

#include "gbl/core.h"

namespace gbl {

// Throws InvariantViolation when two movable jobs could share a machine at t.
CoreOutcome solve_unit_capacity(const Instance &instance, const GuessContext &ctx);

} // namespace gbl

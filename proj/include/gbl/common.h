/*******************************************************************************
 * Basic scalar types and error classes shared by all modules.
 *
 * @file:   common.h
 ******************************************************************************/
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbl {

using Weight = std::int64_t;
using MachineIndex = std::size_t;
using JobIndex = std::size_t;

// Exploration round at which a node was activated.
using Level = std::uint32_t;
inline constexpr Level kUnreached = std::numeric_limits<Level>::max();

// Machine chosen for every job of the original instance, by job index.
using JobAssignment = std::vector<MachineIndex>;

// Malformed or out-of-contract user input (CLI exit code 1).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A guarantee the algorithms promise was observed to fail (CLI exit code 2).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// The exact oracle refused an instance that is too large or took too long.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class SolveMode { kTwoValued, kGeneral };

std::string to_string(SolveMode mode);

} // namespace gbl

/*******************************************************************************
 * Seeded random source with platform-stable integer ranges.
 *
 * std::uniform_int_distribution is implementation defined, so generated
 * corpora would differ between standard libraries; this draws by rejection.
 *
 * @file:   random.h
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace gbl {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : _engine(seed) {}

  // Uniform in [lo, hi]; requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {
      return static_cast<std::int64_t>(_engine());
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = _engine();
    while (x >= limit) {
      x = _engine();
    }
    return lo + static_cast<std::int64_t>(x % span);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1));
  }

  bool coin() {
    return uniform(0, 1) == 1;
  }

  // k distinct values from [0, n), in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) {
      pool[i] = i;
    }
    k = std::min(k, n);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + index(n - i)]);
    }
    pool.resize(k);
    return pool;
  }

  template <typename T> void shuffle(std::vector<T> &values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

private:
  std::mt19937_64 _engine;
};

} // namespace gbl

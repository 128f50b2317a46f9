#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hk {

// Worker-thread count used by parallel loops. Defaults to the hardware
// concurrency, overridable via HOMOTOPYKIT_THREADS or set_thread_count().
int thread_count();
void set_thread_count(int n);

// Runs fn(i) for i in [0, n). Chunked across threads; each index must only
// write its own slots so results are identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Pairwise (cascade) summation with a fixed reduction tree, independent of
// thread count.
double pairwise_sum(std::span<const double> xs);

// Deterministic splitmix64 stream used by the map fixtures instead of
// std::*_distribution, whose output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Uniform in [-1, 1).
  double next_symmetric();

private:
  std::uint64_t state_;
};

}  // namespace hk

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace cilab {

/// Deterministic: a single fixed-order pass, bit-identical across runs and
/// machines. Fast: per-thread partial sums; the result depends on the number
/// of hardware threads.
enum class Summation { Deterministic, Fast };

void set_summation(Summation mode);
Summation summation();

/// sum_{i < count} term(i), honouring the process summation mode.
template <class T, class Term, class Combine>
T reduce_cells(std::int64_t count, T init, Term term, Combine combine) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (summation() == Summation::Deterministic || hw == 1 || count < 4096) {
    T acc = init;
    for (std::int64_t i = 0; i < count; ++i) acc = combine(acc, term(i));
    return acc;
  }
  std::vector<T> partial(hw, init);
  std::vector<std::thread> pool;
  const std::int64_t chunk = (count + hw - 1) / hw;
  for (unsigned t = 0; t < hw; ++t) {
    pool.emplace_back([&, t] {
      const std::int64_t lo = t * chunk;
      const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
      T acc = init;
      for (std::int64_t i = lo; i < hi; ++i) acc = combine(acc, term(i));
      partial[t] = acc;
    });
  }
  for (auto& th : pool) th.join();
  T acc = init;
  for (const auto& p : partial) acc = combine(acc, p);
  return acc;
}

template <class Term>
double sum_cells(std::int64_t count, Term term) {
  return reduce_cells(count, 0.0, term, [](double a, double b) { return a + b; });
}

}  // namespace cilab

#include "cilab/parallel.hpp"

#include <atomic>

namespace cilab {

namespace {
std::atomic<Summation> g_mode{Summation::Deterministic};
}

void set_summation(Summation mode) { g_mode.store(mode); }
Summation summation() { return g_mode.load(); }

}  // namespace cilab

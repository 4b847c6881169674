#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "brwlab/label.hpp"
#include "brwlab/law.hpp"
#include "brwlab/population.hpp"

namespace brwlab {

class MemoryBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationRequest {
  int n = 10;
  SimulationMode mode = SimulationMode::exact;
  BarrierSpec barrier;             // pruned mode only
  int mark_depth = 0;              // cutoff k of the ancestor marks
  std::uint64_t seed = 1;
  std::size_t max_particles = std::size_t{1} << 22;  // per generation
};

/// Grows the tree generation by generation from a root at 0.
///
/// Exact mode keeps every particle and the whole history. Pruned mode drops
/// any particle leaving the barrier tube of `barrier` at some generation and
/// discards ancestors that no longer have living descendants; its frontier
/// is exactly the tube-respecting subset of the exact frontier for the same
/// seed, with identical labels and bit-identical positions.
///
/// Throws MemoryBudgetExceeded when a generation outgrows max_particles (or,
/// in exact mode, when the expected frontier size already does).
Population simulate(const ReproductionLaw& law, const SimulationRequest& request);

/// Stream key of the root; child keys derive from the parent key and ordinal.
std::uint64_t root_key(std::uint64_t seed);

/// m_n = (3/2) log n. Requires n >= 1.
double centering(int n);

struct Minimum {
  double value = 0.0;
  std::size_t index = 0;
  Label label;
};

/// Smallest frontier position; ties go to the lexicographically smallest
/// label. Throws ExtinctPopulation.
Minimum minimum(const Population& pop);

}  // namespace brwlab

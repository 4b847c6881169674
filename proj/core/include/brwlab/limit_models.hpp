#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "brwlab/label.hpp"
#include "brwlab/point_measure.hpp"
#include "brwlab/rng.hpp"

namespace brwlab {

/// Atoms of a Poisson process with intensity c e^x dx on (-inf, level].
/// Throws std::invalid_argument for c <= 0 and std::length_error when the
/// expected count c e^level exceeds max_expected_atoms.
PointMeasure sample_ppp_exponential(double c, double level, StreamRng& rng,
                                    double max_expected_atoms = 1e7);

using DecorationSampler = std::function<PointMeasure(StreamRng&)>;
using MarkSampler = std::function<Label(std::size_t atom_index, StreamRng&)>;

/// Marks atom i (ascending order of the Poisson atoms, 0-based) as Label{i+1}.
Label sequential_mark(std::size_t atom_index, StreamRng& rng);

/// Decorated Poisson process: atoms xi of PPP(c e^x dx), each replaced by
/// xi + shift + D with D an independent decoration (min D = 0). Only atoms at
/// or below window_top are produced.
struct SdpppSpec {
  double intensity_c = 1.0;
  double shift = 0.0;
  double window_top = 0.0;
  DecorationSampler decoration;  // empty means the single atom {0}
  MarkSampler mark = sequential_mark;
  double max_expected_atoms = 1e7;

  void validate() const;
};

/// Throws std::logic_error when a decoration sample has minimum != 0.
MarkedPointMeasure sample_sdppp(const SdpppSpec& spec, StreamRng& rng);

/// Decoration sampler that draws uniformly from a fixed pool of measures,
/// each of which must have minimum exactly 0.
DecorationSampler empirical_decorations(std::vector<PointMeasure> pool);

/// Mark sampler drawing i.i.d. from the normalized positive part of `masses`.
MarkSampler weighted_marks(const std::map<Label, double>& masses);

struct MassPartition {
  std::vector<double> weights;     // non-increasing, positive
  double truncation_residual = 0;  // mass not covered by `weights`

  void validate() const;  // sorting, positivity and sum + residual = 1
  void write_json(std::ostream& out) const;
};

/// Beta(a, b) as G1 / (G1 + G2) with independent Gamma(a), Gamma(b) variates
/// (Marsaglia-Tsang on ziggurat normals).
double beta_variate(double a, double b, StreamRng& rng);

/// PD(alpha, 0) by stick breaking with V_k ~ Beta(1-alpha, k alpha), each Beta
/// from two Gamma variates. Breaking stops once the expected square mass of
/// the unbroken remainder, r^2 (1-alpha) / (1 + K alpha) after K sticks with
/// remainder r, falls below truncation_eps; the weights are then sorted.
MassPartition sample_pd(double alpha, double truncation_eps, StreamRng& rng);

struct PdOverlap {
  double value = 0.0;        // sum of squared weights
  double error_bound = 0.0;  // residual^2, the most the remainder can add
};
PdOverlap pd_overlap(const MassPartition& partition);

/// pd_overlap(sample_pd(alpha, truncation_eps, rng)) without storing or
/// sorting the weights; consumes the stream identically.
PdOverlap sample_pd_overlap(double alpha, double truncation_eps, StreamRng& rng);

struct GibbsLimitOptions {
  double tolerance = 1e-10;        // omitted mass relative to the total
  std::size_t max_atoms = 5'000'000;
};

/// Masses Z^beta e^{-beta xi_i} over the atoms xi_1 < xi_2 < ... of
/// PPP(c_beta e^x dx); atom i carries the mark Label{i}. Atoms are added in
/// increasing order until the expected mass of the rest is below
/// tolerance times the running total; std::runtime_error if max_atoms is hit.
std::map<Label, double> sample_gibbs_limit(double beta, double c_beta, double z_infty, StreamRng& rng,
                                           const GibbsLimitOptions& options = {});

/// Normalized masses of a Gibbs limit sample, largest first.
std::vector<double> normalized_sorted(const std::map<Label, double>& masses);

}  // namespace brwlab

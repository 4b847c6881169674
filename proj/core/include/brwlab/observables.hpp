#pragma once

#include <map>
#include <span>
#include <vector>

#include "brwlab/label.hpp"
#include "brwlab/point_measure.hpp"
#include "brwlab/population.hpp"

namespace brwlab {

/// Per-generation critical, derivative and (optionally) Gibbs martingales.
struct MartingaleTrace {
  std::vector<double> W;                   // sum e^{-V}
  std::vector<double> Z;                   // sum V e^{-V}
  std::vector<double> betas;
  std::vector<std::vector<double>> W_beta; // [beta index][generation], sum e^{beta (m_g - V)}
};

/// Martingales at every generation 0..n by direct summation. Needs the full
/// history (exact mode); W_{0,beta} uses m_0 = 0.
MartingaleTrace martingales(const Population& pop, std::span<const double> betas = {});

double critical_martingale(const Population& pop);    // W_n of the frontier
double derivative_martingale(const Population& pop);  // Z_n of the frontier

/// Z^u_n = sum over frontier descendants v of u of (V(v)-V(u)) e^{V(u)-V(v)}.
/// Zero when u has no frontier descendant or is not in the tree.
double subtree_derivative(const Population& pop, const Label& u);

/// W^u_{n-|u|} = sum over frontier descendants v of u of e^{V(u)-V(v)}.
double subtree_critical(const Population& pop, const Label& u);

/// gamma_n: atoms V(u) - m_n. Throws ExtinctPopulation.
PointMeasure extremal_process(const Population& pop);

/// mu_n with marks cut at generation k: atoms (u_k, V(u) - m_n).
MarkedPointMeasure marked_extremal_process(const Population& pop, int k);

/// Atoms (u_k, V(u) - M_n) with k the population's mark depth; the minimum
/// atom is exactly 0.
MarkedPointMeasure seen_from_min(const Population& pop);

/// rho_{n,k}: V(u) - M_n over particles whose common ancestor with the
/// lexicographically first minimizer has depth >= k.
PointMeasure decoration_window(const Population& pop, int k);

/// For each stored generation-k node a, sum over its frontier descendants of
/// V e^{-V}. Finite-n masses can be negative and are left unclamped.
std::map<Label, double> critical_measure_masses(const Population& pop, int k);

}  // namespace brwlab

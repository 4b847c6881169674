#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "brwlab/rng.hpp"

namespace brwlab {

/// Closed forms of the first-generation moments, when the law knows them.
struct ClosedFormMoments {
  double mean_offspring;   // E sum 1
  double sum_exp;          // E sum e^{-V}
  double sum_v_exp;        // E sum V e^{-V}
  double sum_v2_exp;       // E sum V^2 e^{-V}, the variance sigma^2
};

/// Law of the offspring point measure: displacements of the children of one
/// particle relative to their parent. Sampling must be a deterministic
/// function of the stream state.
class ReproductionLaw {
 public:
  virtual ~ReproductionLaw() = default;

  /// Clears `out` and fills it with one draw of the offspring displacements.
  virtual void sample(StreamRng& rng, std::vector<double>& out) const = 0;

  /// Catalog identifier, also written into snapshots.
  virtual std::string id() const = 0;

  virtual std::optional<ClosedFormMoments> moments() const { return std::nullopt; }

  /// Upper bound on the number of children, if any (used for budgeting).
  virtual std::optional<std::size_t> max_offspring() const { return std::nullopt; }
};

/// Two children, i.i.d. Normal(mean, variance) displacements.
class GaussianBinaryLaw final : public ReproductionLaw {
 public:
  /// Boundary-case normalization: mean = variance = 2 log 2.
  GaussianBinaryLaw();
  GaussianBinaryLaw(double mean, double variance);

  void sample(StreamRng& rng, std::vector<double>& out) const override;
  std::string id() const override { return "gaussian_binary"; }
  std::optional<ClosedFormMoments> moments() const override;
  std::optional<std::size_t> max_offspring() const override { return 2; }

  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  double mean_;
  double variance_;
};

/// Poisson(lambda) children with i.i.d. displacements shift + scale * Exp(1).
/// The constructor solves for (shift, scale) so that the law sits in the
/// boundary case; lambda must exceed 1.
class PoissonExponentialLaw final : public ReproductionLaw {
 public:
  explicit PoissonExponentialLaw(double lambda = 2.0);

  void sample(StreamRng& rng, std::vector<double>& out) const override;
  std::string id() const override { return "poisson_exponential"; }
  std::optional<ClosedFormMoments> moments() const override;

  double lambda() const { return lambda_; }
  double shift() const { return shift_; }
  double scale() const { return scale_; }

  /// Probability that the tree dies out, the smallest root of q = e^{lambda (q-1)}.
  double extinction_probability() const;

 private:
  double lambda_;
  double shift_ = 0.0;
  double scale_ = 1.0;
};

/// Fixed displacements (used to exercise validation failures and for tests).
class DeterministicLaw final : public ReproductionLaw {
 public:
  explicit DeterministicLaw(std::vector<double> displacements);
  void sample(StreamRng& rng, std::vector<double>& out) const override;
  std::string id() const override { return "deterministic"; }
  std::optional<ClosedFormMoments> moments() const override;
  std::optional<std::size_t> max_offspring() const override { return displacements_.size(); }

 private:
  std::vector<double> displacements_;
};

struct LawParams {
  std::string id = "gaussian_binary";
  double lambda = 2.0;                        // poisson_exponential only
  double mean = 2.0 * std::numbers::ln2;      // gaussian_binary displacements
  double variance = 2.0 * std::numbers::ln2;
};

/// Throws std::invalid_argument for unknown ids.
std::shared_ptr<const ReproductionLaw> make_law(const LawParams& params);

struct MomentCheck {
  std::string name;
  double target = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> closed_form;
  bool pass = false;
  std::string message;
};

struct ValidationReport {
  std::string law_id;
  std::size_t samples = 0;
  std::vector<MomentCheck> checks;
  bool pass = false;

  const MomentCheck* find(const std::string& name) const;
};

/// Checks supercriticality, E sum e^{-V} = 1, E sum V e^{-V} = 0, a finite
/// positive sigma^2 and a finite log-moment by Monte Carlo over `samples`
/// offspring draws. A statistic passes when its estimate is within `tol` of
/// the target or the target lies inside a 3 SE band; when the law declares
/// closed forms, those decide instead and must match within `tol`.
ValidationReport validate_boundary(const ReproductionLaw& law, std::size_t samples, double tol,
                                   std::uint64_t seed = 0x5eed);

}  // namespace brwlab

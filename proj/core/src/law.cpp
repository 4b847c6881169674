#include "brwlab/law.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace brwlab {

GaussianBinaryLaw::GaussianBinaryLaw()
    : GaussianBinaryLaw(2.0 * std::numbers::ln2, 2.0 * std::numbers::ln2) {}

GaussianBinaryLaw::GaussianBinaryLaw(double mean, double variance)
    : mean_(mean), variance_(variance) {
  if (!(variance > 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("GaussianBinaryLaw: variance must be positive");
  }
}

void GaussianBinaryLaw::sample(StreamRng& rng, std::vector<double>& out) const {
  boost::random::normal_distribution<double> normal(mean_, std::sqrt(variance_));
  out.resize(2);
  out[0] = normal(rng);
  out[1] = normal(rng);
}

std::optional<ClosedFormMoments> GaussianBinaryLaw::moments() const {
  // For X ~ N(m, s2): E e^{-X} = e^{-m+s2/2}, E X e^{-X} = (m-s2) e^{-m+s2/2},
  // E X^2 e^{-X} = ((m-s2)^2 + s2) e^{-m+s2/2}.
  const double m = mean_;
  const double s2 = variance_;
  const double e = std::exp(-m + 0.5 * s2);
  return ClosedFormMoments{2.0, 2.0 * e, 2.0 * (m - s2) * e, 2.0 * ((m - s2) * (m - s2) + s2) * e};
}

PoissonExponentialLaw::PoissonExponentialLaw(double lambda) : lambda_(lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("PoissonExponentialLaw: lambda must exceed 1");
  }
  // X = a + b E with E ~ Exp(1): E e^{-bE} = 1/(1+b), E E e^{-bE} = 1/(1+b)^2.
  // E sum X e^{-X} = 0 forces a = -b/(1+b); E sum e^{-X} = 1 then reads
  // log(lambda) + b/(1+b) - log(1+b) = 0, decreasing in b with one root.
  auto residual = [lambda](double b) { return std::log(lambda) + b / (1.0 + b) - std::log1p(b); };
  double hi = 1.0;
  while (residual(hi) > 0.0) hi *= 2.0;
  boost::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-14; };
  auto [lo_b, hi_b] = boost::math::tools::toms748_solve(residual, 0.0, hi, tol, max_iter);
  scale_ = 0.5 * (lo_b + hi_b);
  shift_ = -scale_ / (1.0 + scale_);
  if (std::abs(residual(scale_)) > 1e-10) {
    throw std::runtime_error("PoissonExponentialLaw: boundary-case root solve did not converge");
  }
}

void PoissonExponentialLaw::sample(StreamRng& rng, std::vector<double>& out) const {
  std::poisson_distribution<int> count(lambda_);
  const int k = count(rng);
  out.resize(static_cast<std::size_t>(k));
  for (auto& x : out) x = shift_ - scale_ * std::log(rng.uniform());
}

std::optional<ClosedFormMoments> PoissonExponentialLaw::moments() const {
  const double a = shift_;
  const double b = scale_;
  const double r = 1.0 / (1.0 + b);
  const double base = lambda_ * std::exp(-a);
  return ClosedFormMoments{
      lambda_,
      base * r,
      base * (a * r + b * r * r),
      base * (a * a * r + 2.0 * a * b * r * r + 2.0 * b * b * r * r * r),
  };
}

double PoissonExponentialLaw::extinction_probability() const {
  auto f = [this](double q) { return std::exp(lambda_ * (q - 1.0)) - q; };
  // f(0) > 0 and f < 0 just below 1 whenever lambda > 1.
  double hi = 1.0 - 1e-9;
  boost::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15; };
  auto [lo, up] = boost::math::tools::toms748_solve(f, 0.0, hi, tol, max_iter);
  return 0.5 * (lo + up);
}

DeterministicLaw::DeterministicLaw(std::vector<double> displacements)
    : displacements_(std::move(displacements)) {}

void DeterministicLaw::sample(StreamRng&, std::vector<double>& out) const { out = displacements_; }

std::optional<ClosedFormMoments> DeterministicLaw::moments() const {
  ClosedFormMoments m{static_cast<double>(displacements_.size()), 0.0, 0.0, 0.0};
  for (double x : displacements_) {
    const double e = std::exp(-x);
    m.sum_exp += e;
    m.sum_v_exp += x * e;
    m.sum_v2_exp += x * x * e;
  }
  return m;
}

std::shared_ptr<const ReproductionLaw> make_law(const LawParams& params) {
  if (params.id == "gaussian_binary") return std::make_shared<GaussianBinaryLaw>(params.mean, params.variance);
  if (params.id == "poisson_exponential") return std::make_shared<PoissonExponentialLaw>(params.lambda);
  throw std::invalid_argument("unknown law id '" + params.id + "'");
}

const MomentCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  bool finite = true;

  void add(double x) {
    if (!std::isfinite(x)) finite = false;
    sum += x;
    sum_sq += x * x;
  }
  double mean(std::size_t n) const { return sum / static_cast<double>(n); }
  double se(std::size_t n) const {
    const double nn = static_cast<double>(n);
    const double m = sum / nn;
    const double var = std::max(0.0, (sum_sq / nn - m * m) * nn / (nn - 1.0));
    return std::sqrt(var / nn);
  }
};

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

}  // namespace

ValidationReport validate_boundary(const ReproductionLaw& law, std::size_t samples, double tol,
                                   std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("validate_boundary: need at least 1000 samples");

  Accumulator count, w, z, s2, logm;
  StreamRng base(seed);
  std::vector<double> children;
  for (std::size_t i = 0; i < samples; ++i) {
    StreamRng rng = base.split(i);
    law.sample(rng, children);
    double c = 0, sw = 0, sz = 0, ss = 0, inner = 0;
    for (double v : children) {
      const double e = std::exp(-v);
      c += 1.0;
      sw += e;
      sz += v * e;
      ss += v * v * e;
      inner += (1.0 + std::max(v, 0.0)) * e;
    }
    const double lp = log_plus(inner);
    count.add(c);
    w.add(sw);
    z.add(sz);
    s2.add(ss);
    logm.add(sw * lp * lp);
  }

  ValidationReport report;
  report.law_id = law.id();
  report.samples = samples;
  const auto closed = law.moments();

  auto make = [&](std::string name, const Accumulator& acc, double target,
                  std::optional<double> cf) {
    MomentCheck c;
    c.name = std::move(name);
    c.target = target;
    c.estimate = acc.mean(samples);
    c.standard_error = acc.se(samples);
    c.closed_form = cf;
    if (!acc.finite || !std::isfinite(c.estimate)) {
      c.pass = false;
      c.message = "non-finite sample moment";
    }
    return c;
  };
  auto agrees = [](const MomentCheck& c, double value) {
    const double band = 3.0 * c.standard_error + 1e-12 * std::max(1.0, std::abs(value));
    return std::abs(c.estimate - value) <= band;
  };
  auto judge_equal = [&](MomentCheck& c) {
    if (!c.message.empty()) return;
    if (c.closed_form) {
      const bool exact = std::abs(*c.closed_form - c.target) <= tol;
      const bool consistent = agrees(c, *c.closed_form);
      c.pass = exact && consistent;
      if (!exact) c.message = "closed form misses target";
      else if (!consistent) c.message = "Monte Carlo estimate disagrees with closed form";
    } else {
      c.pass = std::abs(c.estimate - c.target) <= tol || agrees(c, c.target);
      if (!c.pass) c.message = "estimate misses target";
    }
  };

  auto mean_count = make("mean_offspring", count, 1.0,
                         closed ? std::optional(closed->mean_offspring) : std::nullopt);
  if (mean_count.message.empty()) {
    if (mean_count.closed_form) {
      mean_count.pass = *mean_count.closed_form > 1.0 && agrees(mean_count, *mean_count.closed_form);
    } else {
      mean_count.pass = mean_count.estimate - 3.0 * mean_count.standard_error > 1.0;
    }
    if (!mean_count.pass) mean_count.message = "not supercritical (E sum 1 must exceed 1)";
  }

  auto sum_exp = make("sum_exp", w, 1.0, closed ? std::optional(closed->sum_exp) : std::nullopt);
  judge_equal(sum_exp);
  auto sum_v_exp =
      make("sum_v_exp", z, 0.0, closed ? std::optional(closed->sum_v_exp) : std::nullopt);
  judge_equal(sum_v_exp);

  auto sigma2 = make("sigma2", s2, closed ? closed->sum_v2_exp : s2.mean(samples),
                     closed ? std::optional(closed->sum_v2_exp) : std::nullopt);
  if (sigma2.message.empty()) {
    const double value = closed ? *sigma2.closed_form : sigma2.estimate;
    sigma2.pass = value > 0.0 && std::isfinite(value) && (!closed || agrees(sigma2, value));
    if (!sigma2.pass) sigma2.message = "sigma^2 must be finite and positive";
  }

  auto log_moment = make("log_moment", logm, logm.mean(samples), std::nullopt);
  if (log_moment.message.empty()) log_moment.pass = true;

  report.checks = {mean_count, sum_exp, sum_v_exp, sigma2, log_moment};
  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace brwlab

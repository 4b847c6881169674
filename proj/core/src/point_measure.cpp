#include "brwlab/point_measure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "brwlab/io_util.hpp"

namespace brwlab {

PointMeasure::PointMeasure(std::vector<double> atoms, std::optional<double> ceiling)
    : atoms_(std::move(atoms)), ceiling_(ceiling) {
  for (double x : atoms_) {
    if (!std::isfinite(x)) throw std::invalid_argument("point measure atoms must be finite");
  }
  std::sort(atoms_.begin(), atoms_.end());
}

double PointMeasure::min() const {
  if (atoms_.empty()) throw std::logic_error("min of an empty point measure");
  return atoms_.front();
}

double PointMeasure::integrate(const std::function<double(double)>& f) const {
  double total = 0.0;
  for (double x : atoms_) total += f(x);
  return total;
}

std::size_t PointMeasure::count_at_most(double level) const {
  return static_cast<std::size_t>(std::upper_bound(atoms_.begin(), atoms_.end(), level) - atoms_.begin());
}

PointMeasure PointMeasure::shifted(double s) const {
  PointMeasure out = *this;
  for (auto& x : out.atoms_) x += s;
  if (out.ceiling_) *out.ceiling_ += s;
  return out;
}

void PointMeasure::write_json(std::ostream& out) const {
  out << '[';
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out << ',';
    out << format_double(atoms_[i]);
  }
  out << ']';
}

void PointMeasure::write_csv(std::ostream& out) const {
  out << "value\n";
  for (double x : atoms_) out << format_double(x) << '\n';
}

MarkedPointMeasure::MarkedPointMeasure(std::vector<MarkedAtom> atoms, std::optional<double> ceiling)
    : atoms_(std::move(atoms)), ceiling_(ceiling) {
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.value)) throw std::invalid_argument("point measure atoms must be finite");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const MarkedAtom& l, const MarkedAtom& r) {
    if (l.value != r.value) return l.value < r.value;
    return l.mark < r.mark;
  });
}

PointMeasure MarkedPointMeasure::project() const {
  std::vector<double> values;
  values.reserve(atoms_.size());
  for (const auto& a : atoms_) values.push_back(a.value);
  return PointMeasure(std::move(values), ceiling_);
}

void MarkedPointMeasure::write_json(std::ostream& out) const {
  out << '[';
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out << ',';
    out << "[\"" << atoms_[i].mark.to_string() << "\"," << format_double(atoms_[i].value) << ']';
  }
  out << ']';
}

void MarkedPointMeasure::write_csv(std::ostream& out) const {
  out << "mark,value\n";
  for (const auto& a : atoms_) out << a.mark.to_string() << ',' << format_double(a.value) << '\n';
}

double Trapezoid::operator()(double x) const {
  return std::max(0.0, std::min({1.0, b - x, x - a + 1.0}));
}

}  // namespace brwlab

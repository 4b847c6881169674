#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brwlab/label.hpp"

namespace brwlab {

/// Finite multiset of real atoms, kept sorted ascending.
class PointMeasure {
 public:
  PointMeasure() = default;
  /// Sorts the atoms. Throws std::invalid_argument on non-finite atoms.
  explicit PointMeasure(std::vector<double> atoms, std::optional<double> ceiling = std::nullopt);

  std::span<const double> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double min() const;

  /// Upper end of the observation window when the source was truncated.
  std::optional<double> ceiling() const noexcept { return ceiling_; }

  /// Sum of f over the atoms.
  double integrate(const std::function<double(double)>& f) const;
  std::size_t count_at_most(double level) const;

  PointMeasure shifted(double s) const;

  void write_json(std::ostream& out) const;
  void write_csv(std::ostream& out) const;

  friend bool operator==(const PointMeasure&, const PointMeasure&) = default;

 private:
  std::vector<double> atoms_;
  std::optional<double> ceiling_;
};

struct MarkedAtom {
  Label mark;
  double value = 0.0;

  friend bool operator==(const MarkedAtom&, const MarkedAtom&) = default;
};

/// Atoms paired with ancestor labels, ordered by value then mark.
class MarkedPointMeasure {
 public:
  MarkedPointMeasure() = default;
  explicit MarkedPointMeasure(std::vector<MarkedAtom> atoms, std::optional<double> ceiling = std::nullopt);

  std::span<const MarkedAtom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  std::optional<double> ceiling() const noexcept { return ceiling_; }

  /// Drops the marks.
  PointMeasure project() const;

  void write_json(std::ostream& out) const;
  void write_csv(std::ostream& out) const;

  friend bool operator==(const MarkedPointMeasure&, const MarkedPointMeasure&) = default;

 private:
  std::vector<MarkedAtom> atoms_;
  std::optional<double> ceiling_;
};

/// Trapezoid test function max(0, min(1, b - x, x - a + 1)): equal to 1 on
/// [a, b-1], supported on (a-1, b).
struct Trapezoid {
  double a = 0.0;
  double b = 3.0;
  double operator()(double x) const;
};

}  // namespace brwlab

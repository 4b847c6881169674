#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace brwlab {

/// Ulam-Harris node identifier: the sequence of 1-based child ordinals
/// leading from the root. The root is the empty sequence and prints as "@".
class Label {
 public:
  using value_type = std::uint32_t;

  Label() = default;
  Label(std::initializer_list<value_type> path);
  explicit Label(std::vector<value_type> path);

  static Label root() { return {}; }

  /// Parses "1.2.5" or "@". Throws std::invalid_argument on malformed text.
  static Label parse(std::string_view text);

  std::size_t depth() const noexcept { return path_.size(); }
  bool is_root() const noexcept { return path_.empty(); }
  std::span<const value_type> path() const noexcept { return path_; }
  value_type operator[](std::size_t i) const { return path_[i]; }

  /// Ancestor at generation k (u_k). k larger than depth() returns *this.
  Label prefix(std::size_t k) const;
  Label parent() const;
  Label child(value_type ordinal) const;

  std::string to_string() const;

  // Lexicographic order on sequences; a strict prefix sorts first.
  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::vector<value_type> path_;
};

struct MrcaResult {
  Label ancestor;
  std::size_t depth = 0;
};

/// Cantor embedding 2 * sum_j 3^{-(u(1)+...+u(j))}.
///
/// Exact to double precision while the cumulative ordinal sum stays below
/// 500. Terms whose exponent underflows contribute 0, so deeper labels
/// saturate monotonically. Never compare labels through this value.
double psi_embed(const Label& u);

double distance(const Label& u, const Label& v);

MrcaResult mrca(const Label& u, const Label& v);

/// True iff v lies in the ball B(u), i.e. u is a prefix of v.
bool ball_contains(const Label& u, const Label& v);

}  // namespace brwlab

template <>
struct std::hash<brwlab::Label> {
  std::size_t operator()(const brwlab::Label& u) const noexcept;
};

#include "brwlab/label.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace brwlab {

namespace {

void check_entries(const std::vector<Label::value_type>& path) {
  for (auto x : path) {
    if (x == 0) throw std::invalid_argument("label entries must be >= 1");
  }
}

}  // namespace

Label::Label(std::initializer_list<value_type> path) : path_(path) {
  check_entries(path_);
}

Label::Label(std::vector<value_type> path) : path_(std::move(path)) {
  check_entries(path_);
}

Label Label::parse(std::string_view text) {
  if (text == "@") return {};
  if (text.empty()) throw std::invalid_argument("empty label text");
  std::vector<value_type> path;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    auto token = text.substr(pos, dot - pos);
    value_type value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
      throw std::invalid_argument("malformed label: '" + std::string(text) + "'");
    }
    path.push_back(value);
    pos = dot + 1;
  }
  return Label(std::move(path));
}

Label Label::prefix(std::size_t k) const {
  if (k >= path_.size()) return *this;
  Label out;
  out.path_.assign(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

Label Label::parent() const {
  if (path_.empty()) throw std::logic_error("root has no parent");
  return prefix(path_.size() - 1);
}

Label Label::child(value_type ordinal) const {
  if (ordinal == 0) throw std::invalid_argument("child ordinal must be >= 1");
  Label out = *this;
  out.path_.push_back(ordinal);
  return out;
}

std::string Label::to_string() const {
  if (path_.empty()) return "@";
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(path_[i]);
  }
  return out;
}

double psi_embed(const Label& u) {
  double sum = 0.0;
  double exponent = 0.0;
  for (auto x : u.path()) {
    exponent += static_cast<double>(x);
    // Underflows to exactly 0 once the exponent passes ~678; later terms only shrink.
    double term = std::pow(3.0, -exponent);
    if (term == 0.0) break;
    sum += term;
  }
  return 2.0 * sum;
}

double distance(const Label& u, const Label& v) {
  if (u == v) return 0.0;
  return std::abs(psi_embed(u) - psi_embed(v));
}

MrcaResult mrca(const Label& u, const Label& v) {
  auto a = u.path();
  auto b = v.path();
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  auto depth = static_cast<std::size_t>(ia - a.begin());
  return {u.prefix(depth), depth};
}

bool ball_contains(const Label& u, const Label& v) {
  if (u.depth() > v.depth()) return false;
  auto a = u.path();
  return std::equal(a.begin(), a.end(), v.path().begin());
}

}  // namespace brwlab

std::size_t std::hash<brwlab::Label>::operator()(const brwlab::Label& u) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : u.path()) {
    h ^= x;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (u.depth() * 0x9e3779b97f4a7c15ULL));
}

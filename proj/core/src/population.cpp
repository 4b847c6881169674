#include "brwlab/population.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "brwlab/io_util.hpp"

namespace brwlab {

const char* to_string(SimulationMode mode) {
  return mode == SimulationMode::exact ? "exact" : "pruned";
}

SimulationMode parse_mode(const std::string& text) {
  if (text == "exact") return SimulationMode::exact;
  if (text == "pruned") return SimulationMode::pruned;
  throw std::invalid_argument("unknown simulation mode '" + text + "'");
}

double BarrierSpec::curve(int n, int j) {
  if (j < 0 || j > n) throw std::out_of_range("barrier curve: generation outside [0, n]");
  return 1.5 * std::log((n + 1.0) / (n - j + 1.0));
}

double BarrierSpec::upper_offset(int n, int j) const {
  if (std::isinf(taper_slope)) return y_top;
  const double edge = std::sqrt(static_cast<double>(std::min(j, n - j)));
  return std::min(y_top, taper_base + taper_slope * edge);
}

void BarrierSpec::validate() const {
  if (!(y >= 0.0) || !std::isfinite(y)) throw std::invalid_argument("barrier y must be >= 0");
  if (!(y_top >= 0.0) || !std::isfinite(y_top)) throw std::invalid_argument("barrier y_top must be >= 0");
  if (!(taper_base >= 0.0) || !(taper_slope >= 0.0)) {
    throw std::invalid_argument("barrier taper parameters must be >= 0");
  }
}

Population::Population(std::vector<Generation> generations, PopulationInfo info)
    : levels_(std::move(generations)), info_(std::move(info)) {
  if (levels_.empty()) throw std::invalid_argument("population needs at least the root generation");
  const auto& root = levels_.front();
  if (root.size() != 1 || !root.parent.empty() || !root.ordinal.empty()) {
    throw std::invalid_argument("generation 0 must hold exactly the root");
  }
  for (std::size_t g = 1; g < levels_.size(); ++g) {
    const auto& lv = levels_[g];
    const auto prev = levels_[g - 1].size();
    if (lv.parent.size() != lv.size() || lv.ordinal.size() != lv.size()) {
      throw std::invalid_argument("generation arrays differ in length");
    }
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (lv.parent[i] >= prev) throw std::invalid_argument("parent index out of range");
      if (lv.ordinal[i] == 0) throw std::invalid_argument("ordinals are 1-based");
      if (i > 0) {
        const bool ordered = lv.parent[i - 1] < lv.parent[i] ||
                             (lv.parent[i - 1] == lv.parent[i] && lv.ordinal[i - 1] < lv.ordinal[i]);
        if (!ordered) throw std::invalid_argument("generation not in lexicographic label order");
      }
    }
  }
  if (info_.mark_depth < 0) throw std::invalid_argument("mark depth must be >= 0");
  if (size() == 0) info_.extinct = true;
}

int Population::mark_depth() const noexcept { return std::min(info_.mark_depth, generation()); }

std::optional<double> Population::position_ceiling() const {
  if (info_.mode != SimulationMode::pruned) return std::nullopt;
  return info_.barrier.upper(generation(), generation());
}

Label Population::node_label(int g, std::size_t idx) const {
  std::vector<Label::value_type> path(static_cast<std::size_t>(g));
  for (int d = g; d > 0; --d) {
    const auto& lv = levels_[static_cast<std::size_t>(d)];
    path[static_cast<std::size_t>(d - 1)] = lv.ordinal.at(idx);
    idx = lv.parent[idx];
  }
  return Label(std::move(path));
}

std::size_t Population::ancestor_index(std::size_t i, int depth) const {
  if (depth < 0 || depth > generation()) throw std::out_of_range("ancestor depth outside [0, n]");
  for (int d = generation(); d > depth; --d) i = levels_[static_cast<std::size_t>(d)].parent.at(i);
  return i;
}

int Population::split_depth(std::size_t i, std::size_t j) const {
  int d = generation();
  while (i != j) {
    i = levels_[static_cast<std::size_t>(d)].parent[i];
    j = levels_[static_cast<std::size_t>(d)].parent[j];
    --d;
  }
  return d;
}

std::optional<std::size_t> Population::find(const Label& u) const {
  if (static_cast<int>(u.depth()) > generation()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t d = 1; d <= u.depth(); ++d) {
    const auto& lv = levels_[d];
    auto lo = std::lower_bound(lv.parent.begin(), lv.parent.end(), static_cast<std::uint32_t>(idx));
    auto hi = std::upper_bound(lo, lv.parent.end(), static_cast<std::uint32_t>(idx));
    auto first = static_cast<std::size_t>(lo - lv.parent.begin());
    auto last = static_cast<std::size_t>(hi - lv.parent.begin());
    auto it = std::lower_bound(lv.ordinal.begin() + static_cast<std::ptrdiff_t>(first),
                               lv.ordinal.begin() + static_cast<std::ptrdiff_t>(last), u[d - 1]);
    auto pos = static_cast<std::size_t>(it - lv.ordinal.begin());
    if (pos == last || lv.ordinal[pos] != u[d - 1]) return std::nullopt;
    idx = pos;
  }
  return idx;
}

IndexRange Population::descendants(int g, std::size_t idx, int target) const {
  if (g < 0 || target < g || target > generation()) throw std::out_of_range("descendants: bad generations");
  IndexRange r{idx, idx + 1};
  for (int d = g + 1; d <= target && !r.empty(); ++d) {
    const auto& par = levels_[static_cast<std::size_t>(d)].parent;
    auto lo = std::lower_bound(par.begin(), par.end(), static_cast<std::uint32_t>(r.begin));
    auto hi = std::lower_bound(lo, par.end(), static_cast<std::uint32_t>(r.end));
    r = {static_cast<std::size_t>(lo - par.begin()), static_cast<std::size_t>(hi - par.begin())};
  }
  if (r.empty()) return {0, 0};
  return r;
}

Population Population::shifted(double s) const {
  auto levels = levels_;
  for (auto& lv : levels) {
    for (auto& x : lv.position) x += s;
  }
  return Population(std::move(levels), info_);
}

void Population::write_csv(std::ostream& out) const {
  out << "label,position,ancestor_mark\n";
  const auto pos = positions();
  for (std::size_t i = 0; i < size(); ++i) {
    out << label(i).to_string() << ',' << format_double(pos[i]) << ',' << ancestor_mark(i).to_string()
        << '\n';
  }
}

namespace {

constexpr char kMagic[8] = {'B', 'R', 'W', 'P', 'O', 'P', '\0', '\1'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("snapshot truncated");
  return value;
}

template <typename T>
void put_array(std::ostream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void get_array(std::istream& in, std::vector<T>& v, std::size_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw std::runtime_error("snapshot truncated");
}

}  // namespace

void Population::write_snapshot(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put(out, kSnapshotVersion);
  put(out, static_cast<std::uint32_t>(info_.law_id.size()));
  out.write(info_.law_id.data(), static_cast<std::streamsize>(info_.law_id.size()));
  put(out, static_cast<std::uint32_t>(generation()));
  put(out, static_cast<std::uint8_t>(info_.mode));
  put(out, info_.barrier.y);
  put(out, info_.barrier.y_top);
  put(out, info_.barrier.taper_base);
  put(out, info_.barrier.taper_slope);
  put(out, info_.seed);
  put(out, static_cast<std::uint32_t>(info_.mark_depth));
  put(out, static_cast<std::uint8_t>(info_.extinct));
  put(out, static_cast<std::uint8_t>(info_.complete_history));
  for (const auto& lv : levels_) {
    put(out, static_cast<std::uint64_t>(lv.size()));
    put_array(out, lv.position);
    put(out, static_cast<std::uint64_t>(lv.parent.size()));
    put_array(out, lv.parent);
    put_array(out, lv.ordinal);
  }
}

Population Population::read_snapshot(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw std::runtime_error("not a population snapshot");
  if (get<std::uint32_t>(in) != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version");
  PopulationInfo info;
  info.law_id.resize(get<std::uint32_t>(in));
  in.read(info.law_id.data(), static_cast<std::streamsize>(info.law_id.size()));
  const auto n = get<std::uint32_t>(in);
  const auto mode = get<std::uint8_t>(in);
  if (mode > 1) throw std::runtime_error("snapshot: bad mode");
  info.mode = static_cast<SimulationMode>(mode);
  info.barrier.y = get<double>(in);
  info.barrier.y_top = get<double>(in);
  info.barrier.taper_base = get<double>(in);
  info.barrier.taper_slope = get<double>(in);
  info.seed = get<std::uint64_t>(in);
  info.mark_depth = static_cast<int>(get<std::uint32_t>(in));
  info.extinct = get<std::uint8_t>(in) != 0;
  info.complete_history = get<std::uint8_t>(in) != 0;
  std::vector<Generation> levels(n + 1);
  for (auto& lv : levels) {
    const auto count = get<std::uint64_t>(in);
    get_array(in, lv.position, count);
    const auto links = get<std::uint64_t>(in);
    get_array(in, lv.parent, links);
    get_array(in, lv.ordinal, links);
  }
  return Population(std::move(levels), std::move(info));
}

}  // namespace brwlab

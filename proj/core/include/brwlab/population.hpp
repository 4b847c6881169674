#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "brwlab/label.hpp"

namespace brwlab {

enum class SimulationMode : std::uint8_t { exact = 0, pruned = 1 };

const char* to_string(SimulationMode mode);
SimulationMode parse_mode(const std::string& text);

/// Barrier tube used by pruned simulation. A particle at generation j is kept
/// while f_n(j) - y <= V <= f_n(j) + h(j), with
/// f_n(j) = (3/2) log((n+1)/(n-j+1)) and upper offset
/// h(j) = min(y_top, taper_base + taper_slope * sqrt(min(j, n-j))).
/// An infinite taper_slope gives the flat tube h = y_top.
struct BarrierSpec {
  double y = 15.0;
  double y_top = 35.0;
  double taper_base = 0.0;
  double taper_slope = INFINITY;

  static double curve(int n, int j);
  double upper_offset(int n, int j) const;
  double lower(int n, int j) const { return curve(n, j) - y; }
  double upper(int n, int j) const { return curve(n, j) + upper_offset(n, j); }
  void validate() const;
};

/// One generation of the stored genealogy. Nodes are kept in lexicographic
/// label order: parents are non-decreasing and siblings appear by ordinal,
/// so the descendants of any node form a contiguous block in every later
/// generation.
struct Generation {
  std::vector<double> position;
  std::vector<std::uint32_t> parent;   // index into the previous generation; empty at the root
  std::vector<std::uint32_t> ordinal;  // 1-based child index (the last label entry)

  std::size_t size() const noexcept { return position.size(); }
};

struct PopulationInfo {
  std::string law_id;
  std::uint64_t seed = 0;
  SimulationMode mode = SimulationMode::exact;
  BarrierSpec barrier;        // meaningful in pruned mode only
  int mark_depth = 0;         // cutoff k for ancestor marks, clamped to n
  bool extinct = false;
  bool complete_history = true;  // every generation retained in full
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }
};

class ExtinctPopulation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The generation-n frontier of one realized tree together with the
/// genealogy of its ancestors. Immutable once constructed.
class Population {
 public:
  /// Validates ordering and parent links; throws std::invalid_argument.
  Population(std::vector<Generation> generations, PopulationInfo info);

  int generation() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  std::size_t size() const noexcept { return levels_.back().size(); }
  bool extinct() const noexcept { return info_.extinct || size() == 0; }
  const PopulationInfo& info() const noexcept { return info_; }
  int mark_depth() const noexcept;

  std::span<const double> positions() const noexcept { return levels_.back().position; }
  const Generation& level(int g) const { return levels_.at(static_cast<std::size_t>(g)); }

  /// Upper position cut in force at generation n (pruned mode only).
  std::optional<double> position_ceiling() const;

  Label label(std::size_t i) const { return node_label(generation(), i); }
  Label node_label(int g, std::size_t idx) const;
  Label ancestor_mark(std::size_t i) const { return node_label(mark_depth(), ancestor_index(i, mark_depth())); }

  /// Index, within generation `depth`, of the ancestor of frontier particle i.
  std::size_t ancestor_index(std::size_t i, int depth) const;

  /// Depth of the most recent common ancestor of frontier particles i and j.
  int split_depth(std::size_t i, std::size_t j) const;

  /// Node index of u in generation |u|, if u belongs to the stored tree.
  std::optional<std::size_t> find(const Label& u) const;

  /// Descendants, in generation `target`, of node `idx` of generation g.
  IndexRange descendants(int g, std::size_t idx, int target) const;

  /// Copy with every position translated by s.
  Population shifted(double s) const;

  void write_csv(std::ostream& out) const;
  void write_snapshot(std::ostream& out) const;
  static Population read_snapshot(std::istream& in);

 private:
  std::vector<Generation> levels_;
  PopulationInfo info_;
};

}  // namespace brwlab

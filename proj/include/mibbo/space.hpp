#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mibbo {

// One coordinate of the search space.  An empty value list marks a continuous
// dimension; otherwise `values` is the strictly increasing list of admissible
// discrete values (size 2 means binary).
struct Dimension {
  std::vector<double> values;

  bool is_continuous() const { return values.empty(); }
  bool is_binary() const { return values.size() == 2; }
  bool is_integer() const { return values.size() > 2; }
};

Dimension continuous_dimension();
Dimension binary_dimension();  // {0, 1}
Dimension integer_dimension(int lo, int hi);

// Mixed-integer search space: continuous dimensions first, then binary, then
// integer.  Precomputes the midpoint decision thresholds between consecutive
// discrete values and answers all encoding queries.
class MixedIntegerSpace {
 public:
  explicit MixedIntegerSpace(std::vector<Dimension> dims);

  int size() const { return static_cast<int>(dims_.size()); }
  int n_continuous() const { return n_continuous_; }
  int n_binary() const { return n_binary_; }
  int n_integer() const { return n_integer_; }
  int n_discrete() const { return n_binary_ + n_integer_; }

  const Dimension& dim(int j) const { return dims_[static_cast<std::size_t>(j)]; }
  bool is_discrete(int j) const { return !dim(j).is_continuous(); }

  // Thresholds for dimension j, ascending; empty for continuous dimensions.
  std::span<const double> thresholds(int j) const {
    return thresholds_[static_cast<std::size_t>(j)];
  }

  // Maps a raw coordinate to its discrete cell value; a value exactly on a
  // threshold belongs to the lower cell.  Identity on continuous dimensions.
  double encode_dim(int j, double v) const;
  std::vector<double> encode(std::span<const double> v) const;

  // Closest threshold to m; ties resolve to the smaller threshold.  Only
  // valid on discrete dimensions.
  double nearest_threshold(int j, double m) const;

  // For m strictly inside the threshold range: the pair (l_low, l_up) with
  // l_low < m <= l_up and no threshold between them.  Throws
  // std::invalid_argument when m lies outside (thresholds.front(),
  // thresholds.back()].
  std::pair<double, double> bracketing_thresholds(int j, double m) const;

 private:
  std::vector<Dimension> dims_;
  std::vector<std::vector<double>> thresholds_;
  int n_continuous_ = 0;
  int n_binary_ = 0;
  int n_integer_ = 0;
};

}  // namespace mibbo

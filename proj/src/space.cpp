#include "mibbo/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mibbo {

Dimension continuous_dimension() { return {}; }

Dimension binary_dimension() { return {{0.0, 1.0}}; }

Dimension integer_dimension(int lo, int hi) {
  if (hi <= lo) throw std::invalid_argument("integer_dimension: hi <= lo");
  Dimension d;
  d.values.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int z = lo; z <= hi; ++z) d.values.push_back(static_cast<double>(z));
  return d;
}

MixedIntegerSpace::MixedIntegerSpace(std::vector<Dimension> dims)
    : dims_(std::move(dims)) {
  if (dims_.empty())
    throw std::invalid_argument("MixedIntegerSpace: no dimensions");
  thresholds_.reserve(dims_.size());
  // Enforce the continuous / binary / integer block layout so callers can
  // address each block by index range.
  int stage = 0;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    const Dimension& d = dims_[j];
    if (d.values.size() == 1)
      throw std::invalid_argument("dimension " + std::to_string(j) +
                                  ": a discrete set needs at least 2 values");
    if (!std::is_sorted(d.values.begin(), d.values.end()) ||
        std::adjacent_find(d.values.begin(), d.values.end()) !=
            d.values.end())
      throw std::invalid_argument("dimension " + std::to_string(j) +
                                  ": values must be strictly increasing");
    for (double z : d.values)
      if (!std::isfinite(z))
        throw std::invalid_argument("dimension " + std::to_string(j) +
                                    ": values must be finite");
    const int kind = d.is_continuous() ? 0 : (d.is_binary() ? 1 : 2);
    if (kind < stage)
      throw std::invalid_argument(
          "dimensions must be ordered continuous, binary, integer");
    stage = kind;
    if (kind == 0) ++n_continuous_;
    if (kind == 1) ++n_binary_;
    if (kind == 2) ++n_integer_;

    std::vector<double> th;
    if (!d.is_continuous()) {
      th.reserve(d.values.size() - 1);
      for (std::size_t k = 0; k + 1 < d.values.size(); ++k)
        th.push_back(0.5 * (d.values[k] + d.values[k + 1]));
    }
    thresholds_.push_back(std::move(th));
  }
}

double MixedIntegerSpace::encode_dim(int j, double v) const {
  const Dimension& d = dim(j);
  if (d.is_continuous()) return v;
  if (std::isnan(v))
    throw std::invalid_argument("encode_dim: NaN coordinate in dimension " +
                                std::to_string(j));
  const auto& th = thresholds_[static_cast<std::size_t>(j)];
  // First threshold >= v; v belongs to the cell below it.
  const auto it = std::lower_bound(th.begin(), th.end(), v);
  return d.values[static_cast<std::size_t>(it - th.begin())];
}

std::vector<double> MixedIntegerSpace::encode(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != size())
    throw std::invalid_argument("encode: dimension mismatch");
  std::vector<double> out(v.size());
  for (int j = 0; j < size(); ++j)
    out[static_cast<std::size_t>(j)] = encode_dim(j, v[static_cast<std::size_t>(j)]);
  return out;
}

double MixedIntegerSpace::nearest_threshold(int j, double m) const {
  const auto& th = thresholds_[static_cast<std::size_t>(j)];
  if (th.empty())
    throw std::invalid_argument("nearest_threshold: continuous dimension");
  const auto it = std::lower_bound(th.begin(), th.end(), m);
  if (it == th.begin()) return th.front();
  if (it == th.end()) return th.back();
  const double above = *it;
  const double below = *(it - 1);
  // On an exact tie the smaller threshold wins.
  return (m - below <= above - m) ? below : above;
}

std::pair<double, double> MixedIntegerSpace::bracketing_thresholds(
    int j, double m) const {
  const auto& th = thresholds_[static_cast<std::size_t>(j)];
  if (th.empty())
    throw std::invalid_argument("bracketing_thresholds: continuous dimension");
  if (!(m > th.front()) || !(m <= th.back()))
    throw std::invalid_argument(
        "bracketing_thresholds: m outside the interior threshold range");
  const auto it = std::lower_bound(th.begin(), th.end(), m);
  // it points at the first threshold >= m; the precondition guarantees it is
  // neither begin nor end.
  return {*(it - 1), *it};
}

}  // namespace mibbo

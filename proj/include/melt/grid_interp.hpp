#pragma once

#include <cstddef>
#include <vector>

namespace melt {

// Fritsch-Carlson monotone piecewise cubic through (x_i, y_i). Strictly
// increasing x; y monotone in either direction is preserved without
// overshoot, which keeps interpolated survival curves valid.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  double y_front() const { return y_.front(); }
  double y_back() const { return y_.back(); }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;  // m_ = endpoint slopes
};

}  // namespace melt

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace ucc {

/// Dense rank-4 tensor in row-major order.
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(int d0, int d1, int d2, int d3)
      : dims_{d0, d1, d2, d3},
        data_(static_cast<std::size_t>(d0) * d1 * d2 * d3, 0.0) {}

  double& operator()(int p, int q, int r, int s) { return data_[offset(p, q, r, s)]; }
  double operator()(int p, int q, int r, int s) const { return data_[offset(p, q, r, s)]; }

  int dim(int k) const { return dims_[k]; }
  const std::array<int, 4>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  std::size_t offset(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * dims_[1] + q) * dims_[2] + r) * dims_[3] + s;
  }

  std::array<int, 4> dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

}  // namespace ucc

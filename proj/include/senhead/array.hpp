#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "senhead/common.hpp"
#include "senhead/rng.hpp"

namespace senhead {

// Dense row-major array of 64-bit reals. Rank 1 and 2 cover everything the
// models need; higher ranks are rejected at construction.
struct Array {
  std::vector<int> shape;
  std::vector<double> data;

  Array() = default;
  Array(std::vector<int> shp, std::vector<double> values)
      : shape(std::move(shp)), data(std::move(values)) {
    require(static_cast<size_t>(numel_of(shape)) == data.size(),
            "Array: shape ", shape_str(), " does not match ", data.size(), " values");
  }

  static Array zeros(std::vector<int> shp) {
    int n = numel_of(shp);
    return Array(std::move(shp), std::vector<double>(static_cast<size_t>(n), 0.0));
  }
  static Array full(std::vector<int> shp, double v) {
    int n = numel_of(shp);
    return Array(std::move(shp), std::vector<double>(static_cast<size_t>(n), v));
  }
  static Array scalar(double v) { return Array({1}, {v}); }
  static Array vec(std::vector<double> v) {
    int n = static_cast<int>(v.size());
    return Array({n}, std::move(v));
  }
  static Array uniform(std::vector<int> shp, double lo, double hi, Rng& rng) {
    Array a = zeros(std::move(shp));
    for (auto& x : a.data) x = rng.uniform(lo, hi);
    return a;
  }

  int numel() const { return static_cast<int>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int rows() const {
    require(rank() == 2, "Array::rows: rank-2 expected, shape ", shape_str());
    return shape[0];
  }
  int cols() const {
    require(rank() == 2, "Array::cols: rank-2 expected, shape ", shape_str());
    return shape[1];
  }

  double& at(int i) { return data[static_cast<size_t>(i)]; }
  double at(int i) const { return data[static_cast<size_t>(i)]; }
  double& at(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }

  bool same_shape(const Array& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  std::string shape_str() const {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + "]";
  }

  static int numel_of(const std::vector<int>& shp) {
    require(!shp.empty() && shp.size() <= 2, "Array: rank must be 1 or 2");
    long long n = 1;
    for (int d : shp) {
      require(d > 0, "Array: non-positive dimension in shape");
      n *= d;
    }
    return static_cast<int>(n);
  }
};

}  // namespace senhead

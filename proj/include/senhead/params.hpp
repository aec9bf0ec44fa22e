#pragma once

#include <map>
#include <string>
#include <vector>

#include "senhead/array.hpp"

namespace senhead {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    require(lr > 0.0, "AdamConfig: lr must be positive, got ", lr);
    require(beta1 > 0.0 && beta1 < 1.0, "AdamConfig: beta1 out of (0,1): ", beta1);
    require(beta2 > 0.0 && beta2 < 1.0, "AdamConfig: beta2 out of (0,1): ", beta2);
  }
};

// Named trainable arrays plus per-entry Adam state. Iteration order is the
// sorted name order everywhere, which keeps reductions and file layout
// deterministic.
class ParamStore {
 public:
  Array& create(const std::string& name, std::vector<int> shape);
  Array& create_uniform(const std::string& name, std::vector<int> shape, double lo,
                        double hi, Rng& rng);

  bool has(const std::string& name) const { return entries_.count(name) > 0; }
  Array& value(const std::string& name);
  const Array& value(const std::string& name) const;
  Array& grad(const std::string& name);
  const Array& grad(const std::string& name) const;

  std::vector<std::string> names() const;
  size_t size() const { return entries_.size(); }
  int total_coords() const;

  void zero_grads();
  double grad_global_norm() const;
  // Scales all gradients by max_norm/norm when norm exceeds max_norm.
  // Returns the pre-clip norm.
  double clip_global_norm(double max_norm);
  void adam_step(const AdamConfig& cfg);

  // Versioned binary container: magic, version, then (name, shape,
  // little-endian f64 payload) records. Round trip is bit exact. Optimizer
  // state rides along as reserved "<name>#m/#v/#t" records when requested.
  void save(const std::string& path, bool with_opt_state = true) const;
  static ParamStore load(const std::string& path);

  bool operator==(const ParamStore& o) const;

 private:
  struct Entry {
    Array value;
    Array grad;
    Array m;
    Array v;
    long long t = 0;
  };
  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;
  std::map<std::string, Entry> entries_;
};

}  // namespace senhead

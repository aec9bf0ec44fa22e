#pragma once

#include <functional>
#include <string>
#include <vector>

#include "senhead/tape.hpp"

namespace senhead {

// Builds a scalar loss on a fresh tape from the current parameter values.
// The closure must be deterministic; anything stochastic (rollouts,
// advantages) has to be captured as fixed constants.
using LossClosure = std::function<Var(Tape&, ParamStore&)>;

struct GradCheckReport {
  struct Item {
    std::string name;
    double max_rel_err = 0.0;
    int worst_coord = -1;
    double analytic = 0.0;
    double numeric = 0.0;
  };
  std::vector<Item> items;
  double worst = 0.0;
  std::string worst_name;

  bool within(double tol) const { return worst < tol; }
};

// Central finite differences against the tape's analytic gradients for every
// coordinate of every parameter in the store. Relative error uses
// |a - n| / max(|a|, |n|, floor).
GradCheckReport grad_check(ParamStore& store, const LossClosure& closure,
                           double h = 1e-5, double denom_floor = 1e-6);

}  // namespace senhead

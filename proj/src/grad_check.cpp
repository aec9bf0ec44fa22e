#include "senhead/grad_check.hpp"

#include <cmath>

namespace senhead {

GradCheckReport grad_check(ParamStore& store, const LossClosure& closure, double h,
                           double denom_floor) {
  store.zero_grads();
  {
    Tape tape;
    Var loss = closure(tape, store);
    tape.backward(loss);
    tape.accumulate_param_grads(store);
  }

  GradCheckReport report;
  for (const auto& name : store.names()) {
    GradCheckReport::Item item;
    item.name = name;
    Array& theta = store.value(name);
    const Array& analytic = store.grad(name);
    for (int i = 0; i < theta.numel(); ++i) {
      const double orig = theta.at(i);
      theta.at(i) = orig + h;
      double f_plus;
      {
        Tape tape;
        f_plus = tape.value(closure(tape, store)).at(0);
      }
      theta.at(i) = orig - h;
      double f_minus;
      {
        Tape tape;
        f_minus = tape.value(closure(tape, store)).at(0);
      }
      theta.at(i) = orig;
      const double numeric = (f_plus - f_minus) / (2.0 * h);
      const double a = analytic.at(i);
      const double denom = std::max({std::fabs(a), std::fabs(numeric), denom_floor});
      const double rel = std::fabs(a - numeric) / denom;
      if (rel > item.max_rel_err) {
        item.max_rel_err = rel;
        item.worst_coord = i;
        item.analytic = a;
        item.numeric = numeric;
      }
    }
    if (item.max_rel_err > report.worst) {
      report.worst = item.max_rel_err;
      report.worst_name = name;
    }
    report.items.push_back(std::move(item));
  }
  return report;
}

}  // namespace senhead

#include "senhead/tape.hpp"

#include <algorithm>
#include <cmath>

namespace senhead {

namespace {
double softplus(double x) {
  // log(1+e^x) without overflow
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}
}  // namespace

Var Tape::push(Array value, const char* op, std::function<void(Tape&, int)> fn,
               std::string param_name) {
  if (!value.all_finite())
    fail(op, ": non-finite value produced, shape ", value.shape_str());
  Node n;
  n.value = std::move(value);
  n.backward_fn = std::move(fn);
  n.param_name = std::move(param_name);
  nodes_.push_back(std::move(n));
  grads_ready_ = false;
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Node& Tape::node(Var v) {
  require(v.valid() && v.id < static_cast<int>(nodes_.size()), "Tape: invalid var id ", v.id);
  return nodes_[static_cast<size_t>(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
  require(v.valid() && v.id < static_cast<int>(nodes_.size()), "Tape: invalid var id ", v.id);
  return nodes_[static_cast<size_t>(v.id)];
}

const Array& Tape::value(Var v) const { return node(v).value; }

const Array& Tape::grad(Var v) const {
  require(grads_ready_, "Tape::grad: call backward first");
  return node(v).grad;
}

Var Tape::input(Array value) { return push(std::move(value), "input", nullptr); }

Var Tape::param(ParamStore& store, const std::string& name) {
  return push(store.value(name), "param", nullptr, name);
}

// ---------------------------------------------------------------- elementwise

Var Tape::add(Var a, Var b) {
  const Array& va = value(a);
  const Array& vb = value(b);
  if (va.same_shape(vb)) {
    Array out = va;
    for (int i = 0; i < out.numel(); ++i) out.at(i) += vb.at(i);
    return push(std::move(out), "add", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      for (int i = 0; i < g.numel(); ++i) {
        ga.at(i) += g.at(i);
        gb.at(i) += g.at(i);
      }
    });
  }
  if (vb.numel() == 1) {
    Array out = va;
    for (auto& x : out.data) x += vb.at(0);
    return push(std::move(out), "add", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      double s = 0.0;
      for (int i = 0; i < g.numel(); ++i) {
        ga.at(i) += g.at(i);
        s += g.at(i);
      }
      gb.at(0) += s;
    });
  }
  if (va.numel() == 1) return add(b, a);
  if (va.rank() == 2 && vb.rank() == 1 && va.cols() == vb.numel()) {
    Array out = va;
    for (int i = 0; i < va.rows(); ++i)
      for (int j = 0; j < va.cols(); ++j) out.at(i, j) += vb.at(j);
    return push(std::move(out), "add", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
          ga.at(i, j) += g.at(i, j);
          gb.at(j) += g.at(i, j);
        }
    });
  }
  fail("add: incompatible shapes ", va.shape_str(), " and ", vb.shape_str());
}

Var Tape::sub(Var a, Var b) {
  const Array& va = value(a);
  const Array& vb = value(b);
  if (va.same_shape(vb)) {
    Array out = va;
    for (int i = 0; i < out.numel(); ++i) out.at(i) -= vb.at(i);
    return push(std::move(out), "sub", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      for (int i = 0; i < g.numel(); ++i) {
        ga.at(i) += g.at(i);
        gb.at(i) -= g.at(i);
      }
    });
  }
  if (vb.numel() == 1 || va.numel() == 1) return add(a, neg(b));
  fail("sub: incompatible shapes ", va.shape_str(), " and ", vb.shape_str());
}

Var Tape::mul(Var a, Var b) {
  const Array& va = value(a);
  const Array& vb = value(b);
  if (va.same_shape(vb)) {
    Array out = va;
    for (int i = 0; i < out.numel(); ++i) out.at(i) *= vb.at(i);
    return push(std::move(out), "mul", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      const Array& va2 = t.value(a);
      const Array& vb2 = t.value(b);
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      for (int i = 0; i < g.numel(); ++i) {
        ga.at(i) += g.at(i) * vb2.at(i);
        gb.at(i) += g.at(i) * va2.at(i);
      }
    });
  }
  if (vb.numel() == 1) {
    Array out = va;
    for (auto& x : out.data) x *= vb.at(0);
    return push(std::move(out), "mul", [a, b](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      const Array& va2 = t.value(a);
      const double s = t.value(b).at(0);
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      double acc = 0.0;
      for (int i = 0; i < g.numel(); ++i) {
        ga.at(i) += g.at(i) * s;
        acc += g.at(i) * va2.at(i);
      }
      gb.at(0) += acc;
    });
  }
  if (va.numel() == 1) return mul(b, a);
  fail("mul: incompatible shapes ", va.shape_str(), " and ", vb.shape_str());
}

Var Tape::affine(Var a, double k, double c) {
  Array out = value(a);
  for (auto& x : out.data) x = k * x + c;
  return push(std::move(out), "affine", [a, k](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < g.numel(); ++i) ga.at(i) += k * g.at(i);
  });
}

Var Tape::tanh_op(Var a) {
  Array out = value(a);
  for (auto& x : out.data) x = std::tanh(x);
  return push(std::move(out), "tanh", [a](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& y = t.nodes_[self].value;
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < g.numel(); ++i) ga.at(i) += g.at(i) * (1.0 - y.at(i) * y.at(i));
  });
}

Var Tape::sigmoid(Var a) {
  Array out = value(a);
  for (auto& x : out.data) x = 1.0 / (1.0 + std::exp(-x));
  return push(std::move(out), "sigmoid", [a](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& y = t.nodes_[self].value;
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < g.numel(); ++i) ga.at(i) += g.at(i) * y.at(i) * (1.0 - y.at(i));
  });
}

Var Tape::relu(Var a) {
  Array out = value(a);
  for (auto& x : out.data) x = x > 0.0 ? x : 0.0;
  return push(std::move(out), "relu", [a](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& x = t.value(a);
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < g.numel(); ++i)
      if (x.at(i) > 0.0) ga.at(i) += g.at(i);
  });
}

Var Tape::log_op(Var a) {
  Array out = value(a);
  for (auto& x : out.data) x = std::log(x);
  return push(std::move(out), "log", [a](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& x = t.value(a);
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < g.numel(); ++i) ga.at(i) += g.at(i) / x.at(i);
  });
}

// ---------------------------------------------------------------- reductions

Var Tape::sum(Var a) {
  double s = 0.0;
  for (double v : value(a).data) s += v;
  return push(Array::scalar(s), "sum", [a](Tape& t, int self) {
    const double g = t.nodes_[self].grad.at(0);
    Array& ga = t.grad_mut(a);
    for (auto& x : ga.data) x += g;
  });
}

Var Tape::mean(Var a) {
  const int n = value(a).numel();
  return affine(sum(a), 1.0 / n, 0.0);
}

Var Tape::dot(Var a, Var b) {
  const Array& va = value(a);
  const Array& vb = value(b);
  require(va.rank() == 1 && vb.rank() == 1 && va.numel() == vb.numel(),
          "dot: incompatible shapes ", va.shape_str(), " and ", vb.shape_str());
  double s = 0.0;
  for (int i = 0; i < va.numel(); ++i) s += va.at(i) * vb.at(i);
  return push(Array::scalar(s), "dot", [a, b](Tape& t, int self) {
    const double g = t.nodes_[self].grad.at(0);
    const Array& va2 = t.value(a);
    const Array& vb2 = t.value(b);
    Array& ga = t.grad_mut(a);
    Array& gb = t.grad_mut(b);
    for (int i = 0; i < va2.numel(); ++i) {
      ga.at(i) += g * vb2.at(i);
      gb.at(i) += g * va2.at(i);
    }
  });
}

Var Tape::pick(Var a, int i) {
  const Array& va = value(a);
  require(va.rank() == 1, "pick: rank-1 expected, got ", va.shape_str());
  require(i >= 0 && i < va.numel(), "pick: index ", i, " out of range ", va.shape_str());
  return push(Array::scalar(va.at(i)), "pick", [a, i](Tape& t, int self) {
    t.grad_mut(a).at(i) += t.nodes_[self].grad.at(0);
  });
}

Var Tape::concat(std::span<const Var> parts) {
  require(!parts.empty(), "concat: no inputs");
  std::vector<double> out;
  std::vector<Var> ids(parts.begin(), parts.end());
  for (Var p : parts) {
    const Array& v = value(p);
    require(v.rank() == 1, "concat: rank-1 inputs expected, got ", v.shape_str());
    out.insert(out.end(), v.data.begin(), v.data.end());
  }
  return push(Array::vec(std::move(out)), "concat", [ids](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    int off = 0;
    for (Var p : ids) {
      Array& gp = t.grad_mut(p);
      for (int i = 0; i < gp.numel(); ++i) gp.at(i) += g.at(off + i);
      off += gp.numel();
    }
  });
}

Var Tape::slice(Var a, int start, int len) {
  const Array& va = value(a);
  require(va.rank() == 1, "slice: rank-1 expected, got ", va.shape_str());
  require(start >= 0 && len > 0 && start + len <= va.numel(), "slice: range [", start,
          ",", start + len, ") out of ", va.shape_str());
  std::vector<double> out(va.data.begin() + start, va.data.begin() + start + len);
  return push(Array::vec(std::move(out)), "slice", [a, start, len](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < len; ++i) ga.at(start + i) += g.at(i);
  });
}

Var Tape::pad_to(Var a, int n) {
  const Array& va = value(a);
  require(va.rank() == 1, "pad_to: rank-1 expected, got ", va.shape_str());
  require(n >= va.numel(), "pad_to: target ", n, " shorter than ", va.shape_str());
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  std::copy(va.data.begin(), va.data.end(), out.begin());
  const int len = va.numel();
  return push(Array::vec(std::move(out)), "pad_to", [a, len](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    Array& ga = t.grad_mut(a);
    for (int i = 0; i < len; ++i) ga.at(i) += g.at(i);
  });
}

Var Tape::softmax(Var a) {
  const Array& va = value(a);
  Array out = va;
  const int ncols = va.rank() == 1 ? va.numel() : va.cols();
  const int nrows = va.rank() == 1 ? 1 : va.rows();
  for (int r = 0; r < nrows; ++r) {
    double* p = out.data.data() + static_cast<size_t>(r) * ncols;
    double mx = p[0];
    for (int j = 1; j < ncols; ++j) mx = std::max(mx, p[j]);
    double z = 0.0;
    for (int j = 0; j < ncols; ++j) {
      p[j] = std::exp(p[j] - mx);
      z += p[j];
    }
    for (int j = 0; j < ncols; ++j) p[j] /= z;
  }
  return push(std::move(out), "softmax", [a, nrows, ncols](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& y = t.nodes_[self].value;
    Array& ga = t.grad_mut(a);
    for (int r = 0; r < nrows; ++r) {
      const size_t off = static_cast<size_t>(r) * ncols;
      double dotgy = 0.0;
      for (int j = 0; j < ncols; ++j) dotgy += g.data[off + j] * y.data[off + j];
      for (int j = 0; j < ncols; ++j)
        ga.data[off + j] += y.data[off + j] * (g.data[off + j] - dotgy);
    }
  });
}

// ------------------------------------------------------------------- matrix

Var Tape::matmul(Var a, Var b) {
  const Array& va = value(a);
  const Array& vb = value(b);
  require(va.rank() == 2, "matmul: lhs must be rank-2, got ", va.shape_str());
  const int m = va.rows(), k = va.cols();
  if (vb.rank() == 2) {
    require(vb.rows() == k, "matmul: inner dims differ, ", va.shape_str(), " @ ",
            vb.shape_str());
    const int n = vb.cols();
    Array out = Array::zeros({m, n});
    for (int i = 0; i < m; ++i)
      for (int kk = 0; kk < k; ++kk) {
        const double aik = va.at(i, kk);
        if (aik == 0.0) continue;
        for (int j = 0; j < n; ++j) out.at(i, j) += aik * vb.at(kk, j);
      }
    return push(std::move(out), "matmul", [a, b, m, k, n](Tape& t, int self) {
      const Array& g = t.nodes_[self].grad;
      const Array& va2 = t.value(a);
      const Array& vb2 = t.value(b);
      Array& ga = t.grad_mut(a);
      Array& gb = t.grad_mut(b);
      // dA += g @ B^T ; dB += A^T @ g
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          const double gij = g.at(i, j);
          if (gij == 0.0) continue;
          for (int kk = 0; kk < k; ++kk) {
            ga.at(i, kk) += gij * vb2.at(kk, j);
            gb.at(kk, j) += va2.at(i, kk) * gij;
          }
        }
    });
  }
  require(vb.rank() == 1 && vb.numel() == k, "matmul: incompatible shapes ",
          va.shape_str(), " @ ", vb.shape_str());
  Array out = Array::zeros({m});
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int kk = 0; kk < k; ++kk) s += va.at(i, kk) * vb.at(kk);
    out.at(i) = s;
  }
  return push(std::move(out), "matmul", [a, b, m, k](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& va2 = t.value(a);
    const Array& vb2 = t.value(b);
    Array& ga = t.grad_mut(a);
    Array& gb = t.grad_mut(b);
    for (int i = 0; i < m; ++i) {
      const double gi = g.at(i);
      if (gi == 0.0) continue;
      for (int kk = 0; kk < k; ++kk) {
        ga.at(i, kk) += gi * vb2.at(kk);
        gb.at(kk) += va2.at(i, kk) * gi;
      }
    }
  });
}

Var Tape::matmul_tv(Var a, Var v) {
  const Array& va = value(a);
  const Array& vv = value(v);
  require(va.rank() == 2 && vv.rank() == 1 && va.rows() == vv.numel(),
          "matmul_tv: incompatible shapes ", va.shape_str(), " and ", vv.shape_str());
  const int m = va.rows(), k = va.cols();
  Array out = Array::zeros({k});
  for (int i = 0; i < m; ++i) {
    const double vi = vv.at(i);
    if (vi == 0.0) continue;
    for (int j = 0; j < k; ++j) out.at(j) += va.at(i, j) * vi;
  }
  return push(std::move(out), "matmul_tv", [a, v, m, k](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    const Array& va2 = t.value(a);
    const Array& vv2 = t.value(v);
    Array& ga = t.grad_mut(a);
    Array& gv = t.grad_mut(v);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      const double vi = vv2.at(i);
      for (int j = 0; j < k; ++j) {
        ga.at(i, j) += vi * g.at(j);
        acc += va2.at(i, j) * g.at(j);
      }
      gv.at(i) += acc;
    }
  });
}

Var Tape::stack_rows(std::span<const Var> rows) {
  require(!rows.empty(), "stack_rows: no inputs");
  const int n = value(rows[0]).numel();
  Array out = Array::zeros({static_cast<int>(rows.size()), n});
  std::vector<Var> ids(rows.begin(), rows.end());
  for (size_t r = 0; r < rows.size(); ++r) {
    const Array& v = value(rows[r]);
    require(v.rank() == 1 && v.numel() == n, "stack_rows: row ", r, " has shape ",
            v.shape_str(), ", expected [", n, "]");
    std::copy(v.data.begin(), v.data.end(), out.data.begin() + static_cast<long>(r) * n);
  }
  return push(std::move(out), "stack_rows", [ids, n](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    for (size_t r = 0; r < ids.size(); ++r) {
      Array& gr = t.grad_mut(ids[r]);
      for (int j = 0; j < n; ++j) gr.at(j) += g.at(static_cast<int>(r), j);
    }
  });
}

Var Tape::row(Var m, int i) {
  const Array& vm = value(m);
  require(vm.rank() == 2, "row: rank-2 expected, got ", vm.shape_str());
  require(i >= 0 && i < vm.rows(), "row: index ", i, " out of ", vm.shape_str());
  std::vector<double> out(vm.data.begin() + static_cast<long>(i) * vm.cols(),
                          vm.data.begin() + static_cast<long>(i + 1) * vm.cols());
  return push(Array::vec(std::move(out)), "row", [m, i](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    Array& gm = t.grad_mut(m);
    for (int j = 0; j < g.numel(); ++j) gm.at(i, j) += g.at(j);
  });
}

Var Tape::gather_rows(Var m, std::vector<int> idx) {
  const Array& vm = value(m);
  require(vm.rank() == 2, "gather_rows: rank-2 expected, got ", vm.shape_str());
  require(!idx.empty(), "gather_rows: empty index list");
  const int cols = vm.cols();
  Array out = Array::zeros({static_cast<int>(idx.size()), cols});
  for (size_t r = 0; r < idx.size(); ++r) {
    require(idx[r] >= 0 && idx[r] < vm.rows(), "gather_rows: index ", idx[r], " out of ",
            vm.shape_str());
    for (int j = 0; j < cols; ++j) out.at(static_cast<int>(r), j) = vm.at(idx[r], j);
  }
  return push(std::move(out), "gather_rows", [m, idx = std::move(idx), cols](Tape& t, int self) {
    const Array& g = t.nodes_[self].grad;
    Array& gm = t.grad_mut(m);
    for (size_t r = 0; r < idx.size(); ++r)
      for (int j = 0; j < cols; ++j) gm.at(idx[r], j) += g.at(static_cast<int>(r), j);
  });
}

Var Tape::scatter_add(Var base, std::vector<int> idx, Var src) {
  const Array& vb = value(base);
  const Array& vs = value(src);
  require(vb.rank() == 1 && vs.rank() == 1, "scatter_add: rank-1 expected");
  require(static_cast<int>(idx.size()) == vs.numel(), "scatter_add: ", idx.size(),
          " indices vs src ", vs.shape_str());
  Array out = vb;
  for (size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] >= 0 && idx[j] < vb.numel(), "scatter_add: index ", idx[j], " out of ",
            vb.shape_str());
    out.at(idx[j]) += vs.at(static_cast<int>(j));
  }
  return push(std::move(out), "scatter_add",
              [base, src, idx = std::move(idx)](Tape& t, int self) {
                const Array& g = t.nodes_[self].grad;
                Array& gb = t.grad_mut(base);
                Array& gs = t.grad_mut(src);
                for (int i = 0; i < g.numel(); ++i) gb.at(i) += g.at(i);
                for (size_t j = 0; j < idx.size(); ++j)
                  gs.at(static_cast<int>(j)) += g.at(idx[j]);
              });
}

Var Tape::max_over_rows(Var m, int valid_rows) {
  const Array& vm = value(m);
  require(vm.rank() == 2, "max_over_rows: rank-2 expected, got ", vm.shape_str());
  require(valid_rows >= 1 && valid_rows <= vm.rows(), "max_over_rows: valid_rows ",
          valid_rows, " out of ", vm.shape_str());
  const int cols = vm.cols();
  Array out = Array::zeros({cols});
  std::vector<int> argmax(static_cast<size_t>(cols), 0);
  for (int j = 0; j < cols; ++j) {
    double best = vm.at(0, j);
    int bi = 0;
    for (int i = 1; i < valid_rows; ++i)
      if (vm.at(i, j) > best) {
        best = vm.at(i, j);
        bi = i;
      }
    out.at(j) = best;
    argmax[static_cast<size_t>(j)] = bi;
  }
  return push(std::move(out), "max_over_rows",
              [m, argmax = std::move(argmax)](Tape& t, int self) {
                const Array& g = t.nodes_[self].grad;
                Array& gm = t.grad_mut(m);
                for (int j = 0; j < g.numel(); ++j)
                  gm.at(argmax[static_cast<size_t>(j)], j) += g.at(j);
              });
}

// -------------------------------------------------------------------- fused

Tape::LstmState Tape::lstm_step(Var x, const LstmState& prev, Var w_x, Var w_h, Var b) {
  const int h4 = value(b).numel();
  require(h4 % 4 == 0, "lstm_step: bias length must be 4H, got ", h4);
  const int h = h4 / 4;
  Var z = add(add(matmul(w_x, x), matmul(w_h, prev.h)), b);
  Var gi = sigmoid(slice(z, 0, h));
  Var gf = sigmoid(slice(z, h, h));
  Var gc = tanh_op(slice(z, 2 * h, h));
  Var go = sigmoid(slice(z, 3 * h, h));
  Var c = add(mul(gf, prev.c), mul(gi, gc));
  Var hh = mul(go, tanh_op(c));
  return {hh, c};
}

Var Tape::bce_with_logit(Var logit, double target) {
  const Array& vl = value(logit);
  require(vl.numel() == 1, "bce_with_logit: scalar logit expected, got ", vl.shape_str());
  require(target == 0.0 || target == 1.0, "bce_with_logit: target must be 0 or 1, got ",
          target);
  const double x = vl.at(0);
  const double loss = target * softplus(-x) + (1.0 - target) * softplus(x);
  return push(Array::scalar(loss), "bce_with_logit", [logit, target](Tape& t, int self) {
    const double g = t.nodes_[self].grad.at(0);
    const double x2 = t.value(logit).at(0);
    const double sig = 1.0 / (1.0 + std::exp(-x2));
    t.grad_mut(logit).at(0) += g * (sig - target);
  });
}

// ----------------------------------------------------------------- backward

void Tape::backward(Var loss) {
  const Array& lv = value(loss);
  require(lv.numel() == 1, "backward: loss must be scalar, got ", lv.shape_str());
  for (auto& n : nodes_) {
    n.grad = Array::zeros(n.value.shape);
  }
  nodes_[static_cast<size_t>(loss.id)].grad.at(0) = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    auto& n = nodes_[static_cast<size_t>(id)];
    if (n.backward_fn) n.backward_fn(*this, id);
  }
  grads_ready_ = true;
}

void Tape::accumulate_param_grads(ParamStore& store, double scale) const {
  require(grads_ready_, "accumulate_param_grads: call backward first");
  for (const auto& n : nodes_) {
    if (n.param_name.empty()) continue;
    Array& g = store.grad(n.param_name);
    require(g.same_shape(n.grad), "accumulate_param_grads: shape drift for '",
            n.param_name, "'");
    for (int i = 0; i < g.numel(); ++i) g.at(i) += scale * n.grad.at(i);
  }
}

}  // namespace senhead

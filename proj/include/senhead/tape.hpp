#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "senhead/array.hpp"
#include "senhead/params.hpp"

namespace senhead {

// Handle to a node on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Append-only record of primitive ops with reverse-mode adjoints. Node ids
// are creation-ordered, so walking ids backwards from the loss is a reverse
// topological order. A tape is confined to one thread; parameter gradients
// are pulled out afterwards with accumulate_param_grads.
class Tape {
 public:
  // ---- leaves ----
  Var input(Array value);
  Var scalar_input(double v) { return input(Array::scalar(v)); }
  Var param(ParamStore& store, const std::string& name);

  // ---- elementwise / scalar ----
  Var add(Var a, Var b);      // same shape, [m,n]+[n] row broadcast, or len-1 scalar broadcast
  Var sub(Var a, Var b);      // same shape or scalar broadcast
  Var mul(Var a, Var b);      // same shape or scalar broadcast
  Var affine(Var a, double k, double c);  // k*a + c
  Var neg(Var a) { return affine(a, -1.0, 0.0); }
  Var one_minus(Var a) { return affine(a, -1.0, 1.0); }
  Var tanh_op(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var log_op(Var a);
  Var square(Var a) { return mul(a, a); }

  // ---- reductions / shape ----
  Var sum(Var a);
  Var mean(Var a);
  Var dot(Var a, Var b);
  Var pick(Var a, int i);
  Var concat(std::span<const Var> parts);
  Var slice(Var a, int start, int len);
  Var pad_to(Var a, int n);
  Var softmax(Var a);  // rank-1, or rank-2 per row; max-subtracted

  // ---- matrix ----
  Var matmul(Var a, Var b);    // [m,k]@[k,n] or [m,k]@[k]
  Var matmul_tv(Var a, Var v); // A^T v for A [m,k], v [m] -> [k]
  Var stack_rows(std::span<const Var> rows);
  Var row(Var m, int i);
  Var gather_rows(Var m, std::vector<int> idx);
  Var scatter_add(Var base, std::vector<int> idx, Var src);
  Var max_over_rows(Var m, int valid_rows);  // column-wise max over first valid_rows rows

  // ---- fused conveniences built on the primitives above ----
  struct LstmState {
    Var h;
    Var c;
  };
  // Gate layout in w_x [4H,E], w_h [4H,H], b [4H]: input, forget, cell, output.
  LstmState lstm_step(Var x, const LstmState& prev, Var w_x, Var w_h, Var b);

  // Binary cross entropy on a single logit against target in {0,1},
  // computed softplus-style so large logits stay finite.
  Var bce_with_logit(Var logit, double target);

  // ---- values / gradients ----
  const Array& value(Var v) const;
  const Array& grad(Var v) const;
  void backward(Var loss);
  // Adds scale * d(loss)/d(param) into the store gradient of every parameter
  // leaf on this tape. Parameters not on the tape keep their gradient.
  void accumulate_param_grads(ParamStore& store, double scale = 1.0) const;

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Array value;
    Array grad;  // allocated during backward
    std::function<void(Tape&, int)> backward_fn;  // (tape, own id)
    std::string param_name;  // nonempty for parameter leaves
  };

  Var push(Array value, const char* op, std::function<void(Tape&, int)> fn,
           std::string param_name = {});
  Node& node(Var v);
  const Node& node(Var v) const;
  Array& grad_mut(Var v) { return nodes_[static_cast<size_t>(v.id)].grad; }

  std::vector<Node> nodes_;
  bool grads_ready_ = false;
};

}  // namespace senhead

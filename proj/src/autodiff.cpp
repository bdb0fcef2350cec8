#include "spo/autodiff.hpp"

#include <cmath>
#include <string>

#include "spo/error.hpp"

namespace spo {

const Matrix& Value::val() const {
  if (tape == nullptr) throw UsageError("Value: unbound handle");
  return tape->val(*this);
}

double Value::scalar() const {
  const Matrix& m = val();
  if (m.rows() != 1 || m.cols() != 1) {
    throw ShapeError("scalar: value has shape " + m.shape_str());
  }
  return m.at(0, 0);
}

void Tape::check_mine(Value v, const char* who) const {
  if (v.tape != this || v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw UsageError(std::string(who) + ": value not produced by this tape");
  }
}

Value Tape::constant(Matrix v) {
  return make_node("constant", std::move(v), {}, nullptr);
}

Value Tape::parameter(Matrix v) {
  Value out = make_node("parameter", std::move(v), {}, nullptr);
  Node& n = nodes_.back();
  n.is_param = true;
  n.needs_grad = true;
  return out;
}

Value Tape::make_node(const char* op, Matrix value, std::vector<int> parents,
                      BackwardFn backward) {
  if (backward_done_) {
    throw UsageError(std::string(op) + ": tape already backward-traversed");
  }
  if (!value.all_finite()) {
    throw NumericError(std::string(op) + ": produced a non-finite value");
  }
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.parents = std::move(parents);
  n.backward = std::move(backward);
  for (int p : n.parents) {
    if (nodes_[static_cast<std::size_t>(p)].needs_grad) {
      n.needs_grad = true;
      break;
    }
  }
  nodes_.push_back(std::move(n));
  return Value{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Value root) {
  check_mine(root, "backward");
  if (backward_done_) throw UsageError("backward: tape already backward-traversed");
  const Matrix& rv = nodes_[static_cast<std::size_t>(root.id)].value;
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw UsageError("backward: root must be a scalar, got " + rv.shape_str());
  }
  backward_done_ = true;

  for (Node& n : nodes_) {
    if (n.needs_grad) n.grad = Matrix::zeros(n.value.rows(), n.value.cols());
  }
  Node& rn = nodes_[static_cast<std::size_t>(root.id)];
  if (!rn.needs_grad) return;  // root independent of every parameter
  rn.grad.at(0, 0) = 1.0;

  for (int i = root.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.needs_grad && n.backward) n.backward(*this, i);
  }
}

const Matrix& Tape::val(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }

const Matrix& Tape::val(Value v) const {
  check_mine(v, "val");
  return nodes_[static_cast<std::size_t>(v.id)].value;
}

const Matrix& Tape::grad(Value v) const {
  check_mine(v, "grad");
  if (!backward_done_) throw UsageError("grad: backward has not run");
  const Node& n = nodes_[static_cast<std::size_t>(v.id)];
  if (!n.needs_grad) throw UsageError("grad: value does not track a gradient");
  return n.grad;
}

void Tape::accum_grad(int id, const Matrix& delta) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  accumulate(n.grad, delta);
}

namespace {

Tape& same_tape(Value a, Value b, const char* op) {
  if (a.tape == nullptr || a.tape != b.tape) {
    throw UsageError(std::string(op) + ": operands live on different tapes");
  }
  return *a.tape;
}

Tape& tape_of(Value a, const char* op) {
  if (a.tape == nullptr) throw UsageError(std::string(op) + ": unbound value");
  return *a.tape;
}

}  // namespace

Value matmul(Value a, Value b) {
  Tape& t = same_tape(a, b, "matmul");
  Matrix c = matmul(t.val(a), t.val(b));
  const int ai = a.id, bi = b.id;
  return t.make_node("matmul", std::move(c), {ai, bi}, [ai, bi](Tape& tp, int self) {
    const Matrix& gout = tp.grad(Value{&tp, self});
    if (tp.wants_grad(ai)) tp.accum_grad(ai, matmul_nt(gout, tp.val(bi)));
    if (tp.wants_grad(bi)) tp.accum_grad(bi, matmul_tn(tp.val(ai), gout));
  });
}

Value transpose(Value a) {
  Tape& t = tape_of(a, "transpose");
  const int ai = a.id;
  return t.make_node("transpose", transpose(t.val(a)), {ai}, [ai](Tape& tp, int self) {
    if (tp.wants_grad(ai)) tp.accum_grad(ai, transpose(tp.grad(Value{&tp, self})));
  });
}

Value add(Value a, Value b) {
  Tape& t = same_tape(a, b, "add");
  const int ai = a.id, bi = b.id;
  return t.make_node("add", add(t.val(a), t.val(b)), {ai, bi}, [ai, bi](Tape& tp, int self) {
    const Matrix& g = tp.grad(Value{&tp, self});
    if (tp.wants_grad(ai)) tp.accum_grad(ai, g);
    if (tp.wants_grad(bi)) tp.accum_grad(bi, g);
  });
}

Value sub(Value a, Value b) {
  Tape& t = same_tape(a, b, "sub");
  const int ai = a.id, bi = b.id;
  return t.make_node("sub", sub(t.val(a), t.val(b)), {ai, bi}, [ai, bi](Tape& tp, int self) {
    const Matrix& g = tp.grad(Value{&tp, self});
    if (tp.wants_grad(ai)) tp.accum_grad(ai, g);
    if (tp.wants_grad(bi)) tp.accum_grad(bi, scale(g, -1.0));
  });
}

Value scale(Value a, double c) { return affine(a, c, 0.0); }

Value affine(Value a, double mul, double shift) {
  Tape& t = tape_of(a, "affine");
  Matrix out = t.val(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mul * out[i] + shift;
  const int ai = a.id;
  return t.make_node("affine", std::move(out), {ai}, [ai, mul](Tape& tp, int self) {
    if (tp.wants_grad(ai)) tp.accum_grad(ai, scale(tp.grad(Value{&tp, self}), mul));
  });
}

Value concat_cols(Value a, Value b) {
  Tape& t = same_tape(a, b, "concat_cols");
  const Matrix& ma = t.val(a);
  const Matrix& mb = t.val(b);
  if (ma.rows() != mb.rows()) {
    throw ShapeError("concat_cols: row counts differ, " + ma.shape_str() + " vs " +
                     mb.shape_str());
  }
  Matrix out(ma.rows(), ma.cols() + mb.cols());
  for (std::size_t i = 0; i < ma.rows(); ++i) {
    for (std::size_t j = 0; j < ma.cols(); ++j) out.at(i, j) = ma.at(i, j);
    for (std::size_t j = 0; j < mb.cols(); ++j) out.at(i, ma.cols() + j) = mb.at(i, j);
  }
  const int ai = a.id, bi = b.id;
  const std::size_t ca = ma.cols(), cb = mb.cols();
  return t.make_node("concat_cols", std::move(out), {ai, bi},
                     [ai, bi, ca, cb](Tape& tp, int self) {
                       const Matrix& g = tp.grad(Value{&tp, self});
                       if (tp.wants_grad(ai)) {
                         Matrix ga(g.rows(), ca);
                         for (std::size_t i = 0; i < g.rows(); ++i)
                           for (std::size_t j = 0; j < ca; ++j) ga.at(i, j) = g.at(i, j);
                         tp.accum_grad(ai, ga);
                       }
                       if (tp.wants_grad(bi)) {
                         Matrix gb(g.rows(), cb);
                         for (std::size_t i = 0; i < g.rows(); ++i)
                           for (std::size_t j = 0; j < cb; ++j) gb.at(i, j) = g.at(i, ca + j);
                         tp.accum_grad(bi, gb);
                       }
                     });
}

Value row(Value a, std::size_t i) {
  Tape& t = tape_of(a, "row");
  const Matrix& m = t.val(a);
  if (i >= m.rows()) {
    throw IndexError("row: index " + std::to_string(i) + " out of range for " + m.shape_str());
  }
  Matrix out(1, m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) out.at(0, j) = m.at(i, j);
  const int ai = a.id;
  const std::size_t ri = i, rrows = m.rows();
  return t.make_node("row", std::move(out), {ai}, [ai, ri, rrows](Tape& tp, int self) {
    if (!tp.wants_grad(ai)) return;
    const Matrix& g = tp.grad(Value{&tp, self});
    Matrix ga(rrows, g.cols());
    for (std::size_t j = 0; j < g.cols(); ++j) ga.at(ri, j) = g.at(0, j);
    tp.accum_grad(ai, ga);
  });
}

Value sum_squares(Value a) {
  Tape& t = tape_of(a, "sum_squares");
  const Matrix& m = t.val(a);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * m[i];
  const int ai = a.id;
  return t.make_node("sum_squares", Matrix(1, 1, {s}), {ai}, [ai](Tape& tp, int self) {
    if (!tp.wants_grad(ai)) return;
    const double g = tp.grad(Value{&tp, self}).at(0, 0);
    tp.accum_grad(ai, scale(tp.val(ai), 2.0 * g));
  });
}

Value relu(Value a) {
  Tape& t = tape_of(a, "relu");
  Matrix out = t.val(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
  const int ai = a.id;
  return t.make_node("relu", std::move(out), {ai}, [ai](Tape& tp, int self) {
    if (!tp.wants_grad(ai)) return;
    const Matrix& g = tp.grad(Value{&tp, self});
    const Matrix& x = tp.val(ai);
    Matrix ga(g.rows(), g.cols());
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] = x[i] > 0.0 ? g[i] : 0.0;
    tp.accum_grad(ai, ga);
  });
}

Value softmax_row(Value v) {
  Tape& t = tape_of(v, "softmax_row");
  const Matrix& x = t.val(v);
  if (x.rows() != 1 || x.cols() == 0) {
    throw ShapeError("softmax_row: expected a non-empty 1xk row, got " + x.shape_str());
  }
  double mx = x.at(0, 0);
  for (std::size_t j = 1; j < x.cols(); ++j) mx = std::max(mx, x.at(0, j));
  Matrix y(1, x.cols());
  double z = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    y.at(0, j) = std::exp(x.at(0, j) - mx);
    z += y.at(0, j);
  }
  for (std::size_t j = 0; j < x.cols(); ++j) y.at(0, j) /= z;
  const int vi = v.id;
  return t.make_node("softmax_row", std::move(y), {vi}, [vi](Tape& tp, int self) {
    if (!tp.wants_grad(vi)) return;
    const Matrix& g = tp.grad(Value{&tp, self});
    const Matrix& y2 = tp.val(self);
    double dot = 0.0;
    for (std::size_t j = 0; j < y2.cols(); ++j) dot += g.at(0, j) * y2.at(0, j);
    Matrix gx(1, y2.cols());
    for (std::size_t j = 0; j < y2.cols(); ++j) {
      gx.at(0, j) = y2.at(0, j) * (g.at(0, j) - dot);
    }
    tp.accum_grad(vi, gx);
  });
}

Value cross_entropy(Value probs, std::size_t gold) {
  Tape& t = tape_of(probs, "cross_entropy");
  const Matrix& p = t.val(probs);
  if (p.rows() != 1 || p.cols() == 0) {
    throw ShapeError("cross_entropy: expected a non-empty 1xC row, got " + p.shape_str());
  }
  if (gold >= p.cols()) {
    throw IndexError("cross_entropy: gold " + std::to_string(gold) + " out of range for C=" +
                     std::to_string(p.cols()));
  }
  const double loss = -std::log(p.at(0, gold) + kLogEps);
  const int pi = probs.id;
  return t.make_node("cross_entropy", Matrix(1, 1, {loss}), {pi},
                     [pi, gold](Tape& tp, int self) {
                       if (!tp.wants_grad(pi)) return;
                       const double g = tp.grad(Value{&tp, self}).at(0, 0);
                       const Matrix& p2 = tp.val(pi);
                       Matrix gp(1, p2.cols());
                       gp.at(0, gold) = -g / (p2.at(0, gold) + kLogEps);
                       tp.accum_grad(pi, gp);
                     });
}

}  // namespace spo

#pragma once
#include <deque>
#include <functional>
#include <vector>

#include "spo/matrix.hpp"

namespace spo {

class Tape;

// Handle to a node on a Tape. Valid only while the owning tape is alive.
struct Value {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& val() const;
  std::size_t rows() const { return val().rows(); }
  std::size_t cols() const { return val().cols(); }
  double scalar() const;  // requires a 1x1 value
};

// Reverse-mode tape. Every operation records its output and a backward rule;
// backward() replays the rules once, in reverse registration order.
// A tape is single-threaded and may be backward-traversed exactly once;
// distinct tapes are fully independent.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that never receives a gradient (frozen encodings, Q, hand-held
  // constants).
  Value constant(Matrix v);

  // Trainable leaf. Always has a gradient after backward, zero if the root
  // does not depend on it.
  Value parameter(Matrix v);

  // Generic node registration used by all op implementations. The value is
  // checked for finiteness (the no-NaN/Inf contract lives here).
  Value make_node(const char* op, Matrix value, std::vector<int> parents, BackwardFn backward);

  // Seeds d(root)=1 and accumulates gradients into every node that needs
  // them. root must be a 1x1 value of this tape. Calling twice is a usage
  // error.
  void backward(Value root);

  const Matrix& val(int id) const;
  const Matrix& val(Value v) const;
  // Gradient of a node; requires backward() done and a gradient-tracked node.
  const Matrix& grad(Value v) const;

  bool backward_done() const { return backward_done_; }
  std::size_t size() const { return nodes_.size(); }

  // For backward rules: does this node accumulate a gradient at all?
  bool wants_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  // For backward rules: add delta to a parent's gradient.
  void accum_grad(int id, const Matrix& delta);

 private:
  struct Node {
    const char* op;
    Matrix value;
    Matrix grad;  // allocated lazily when backward starts
    std::vector<int> parents;
    BackwardFn backward;
    bool is_param = false;
    bool needs_grad = false;
  };

  void check_mine(Value v, const char* who) const;

  std::deque<Node> nodes_;  // deque: node references stay stable as ops append
  bool backward_done_ = false;
};

// --- tape operations ------------------------------------------------------
// All operands of a binary op must live on the same tape.

Value matmul(Value a, Value b);               // dA = dC*B^T, dB = A^T*dC
Value transpose(Value a);
Value add(Value a, Value b);                  // equal shapes
Value sub(Value a, Value b);                  // equal shapes
Value scale(Value a, double c);
Value affine(Value a, double mul, double shift);  // mul*a + shift, elementwise
Value concat_cols(Value a, Value b);          // equal rows, columns side by side
Value row(Value a, std::size_t i);            // 1 x cols slice of row i
Value sum_squares(Value a);                   // 1x1: sum of squared entries
Value relu(Value a);                          // max(0, x); subgradient 0 at 0
Value softmax_row(Value v);                   // 1xk -> 1xk, max-subtracted
Value cross_entropy(Value probs, std::size_t gold);  // -log(probs[gold] + 1e-12)

// Epsilon inside the cross-entropy logarithm. Fixed, not configurable.
inline constexpr double kLogEps = 1e-12;

}  // namespace spo

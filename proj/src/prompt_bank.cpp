#include "spo/prompt_bank.hpp"

#include <cmath>

#include "spo/error.hpp"
#include "spo/rng.hpp"

namespace spo {

namespace {

constexpr double kNormEps = 1e-12;

// Shared forward/backward for the penalty. With g_ij the cosine of rows i,j
// (norm-guarded) and c = 2/(n(n-1)):
//   L = c * sum_{i<j} g_ij^2
//   dL/dp_k = 2c * sum_{j!=k} g_kj * (p_hat_j - g_kj * u_k) / (|p_k| + eps)
// where u_k = p_k/|p_k| (zero for a zero row).
double penalty_impl(const Matrix& P, Matrix* grad_out) {
  const std::size_t n = P.rows();
  const std::size_t d = P.cols();
  if (n < 1) throw ShapeError("orthogonality_penalty: empty matrix");
  if (grad_out) *grad_out = Matrix::zeros(n, d);
  if (n == 1) return 0.0;

  std::vector<double> norm(n, 0.0);
  Matrix unit(n, d);  // rows p_i / |p_i|, zero rows stay zero
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += P.at(i, j) * P.at(i, j);
    norm[i] = std::sqrt(s);
    if (norm[i] > 0.0) {
      for (std::size_t j = 0; j < d; ++j) unit.at(i, j) = P.at(i, j) / norm[i];
    }
  }
  Matrix hat(n, d);  // rows p_i / (|p_i| + eps)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) hat.at(i, j) = P.at(i, j) / (norm[i] + kNormEps);

  Matrix g = matmul_nt(hat, hat);  // pairwise guarded cosines
  const double coef = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) loss += g.at(i, j) * g.at(i, j);
  loss *= coef;

  if (grad_out) {
    for (std::size_t k = 0; k < n; ++k) {
      const double inv_dk = 1.0 / (norm[k] + kNormEps);
      for (std::size_t j2 = 0; j2 < n; ++j2) {
        if (j2 == k) continue;
        const double gkj = g.at(k, j2);
        for (std::size_t c = 0; c < d; ++c) {
          grad_out->at(k, c) +=
              2.0 * coef * gkj * (hat.at(j2, c) - gkj * unit.at(k, c)) * inv_dk;
        }
      }
    }
  }
  return loss;
}

}  // namespace

PromptBank init_prompts(std::uint64_t seed, std::size_t n, std::size_t d_h, std::size_t d_z) {
  if (n < 1) throw ConfigError("init_prompts: n must be >= 1");
  if (d_h < 1 || d_z < 1) throw ConfigError("init_prompts: dimensions must be >= 1");
  PromptBank bank;
  bank.n = n;
  bank.d_h = d_h;
  bank.d_z = d_z;
  bank.P = Matrix(n, d_h);
  bank.K = Matrix(n, d_h);
  bank.W_f = Matrix(2 * d_h, d_z);
  bank.b_f = Matrix(1, d_z);
  Rng rng(seed);
  const double s_h = 1.0 / std::sqrt(static_cast<double>(d_h));
  const double s_f = 1.0 / std::sqrt(static_cast<double>(2 * d_h));
  for (std::size_t i = 0; i < bank.P.size(); ++i) bank.P[i] = rng.normal(s_h);
  for (std::size_t i = 0; i < bank.K.size(); ++i) bank.K[i] = rng.normal(s_h);
  for (std::size_t i = 0; i < bank.W_f.size(); ++i) bank.W_f[i] = rng.normal(s_f);
  return bank;
}

BoundBank bind(Tape& tape, const PromptBank& bank, bool trainable) {
  BoundBank b;
  if (trainable) {
    b.P = tape.parameter(bank.P);
    b.K = tape.parameter(bank.K);
    b.W_f = tape.parameter(bank.W_f);
    b.b_f = tape.parameter(bank.b_f);
  } else {
    b.P = tape.constant(bank.P);
    b.K = tape.constant(bank.K);
    b.W_f = tape.constant(bank.W_f);
    b.b_f = tape.constant(bank.b_f);
  }
  return b;
}

Fused fuse(Value h, const BoundBank& bank) {
  if (h.val().rows() != 1 || h.val().cols() != bank.K.val().cols()) {
    throw ShapeError("fuse: h is " + h.val().shape_str() + ", keys are " +
                     bank.K.val().shape_str());
  }
  Value s = matmul(h, transpose(bank.K));
  Value alpha = softmax_row(s);
  Value c = matmul(alpha, bank.P);
  Value z = add(matmul(concat_cols(h, c), bank.W_f), bank.b_f);
  return Fused{z, alpha};
}

Value orthogonality_penalty(Value P) {
  if (P.tape == nullptr) throw UsageError("orthogonality_penalty: unbound value");
  Tape& t = *P.tape;
  const double loss = penalty_impl(t.val(P), nullptr);
  const int pi = P.id;
  return t.make_node("orthogonality_penalty", Matrix(1, 1, {loss}), {pi},
                     [pi](Tape& tp, int self) {
                       if (!tp.wants_grad(pi)) return;
                       Matrix gP;
                       penalty_impl(tp.val(pi), &gP);
                       const double g = tp.grad(Value{&tp, self}).at(0, 0);
                       tp.accum_grad(pi, scale(gP, g));
                     });
}

double orthogonality_penalty(const Matrix& P) { return penalty_impl(P, nullptr); }

}  // namespace spo

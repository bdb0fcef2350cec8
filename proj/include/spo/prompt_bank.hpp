#pragma once
#include <cstdint>

#include "spo/autodiff.hpp"
#include "spo/matrix.hpp"

namespace spo {

// The structured prompt factors and the learnable fusion that combines them
// with an encoded text. All four matrices are trainable.
struct PromptBank {
  std::size_t n = 0;    // number of prompt factors
  std::size_t d_h = 0;  // encoder dimension
  std::size_t d_z = 0;  // fused dimension
  Matrix P;    // n x d_h, prompt vectors
  Matrix K;    // n x d_h, relevance keys
  Matrix W_f;  // 2*d_h x d_z, fusion projection
  Matrix b_f;  // 1 x d_z
};

// P, K ~ Normal(0, 1/sqrt(d_h)); W_f ~ Normal(0, 1/sqrt(2*d_h)); b_f = 0.
PromptBank init_prompts(std::uint64_t seed, std::size_t n, std::size_t d_h, std::size_t d_z);

// Tape handles for one bank's parameters.
struct BoundBank {
  Value P, K, W_f, b_f;
};

// Register the bank's matrices on a tape. trainable=false freezes them
// (inference path).
BoundBank bind(Tape& tape, const PromptBank& bank, bool trainable = true);

struct Fused {
  Value z;      // 1 x d_z joint representation
  Value alpha;  // 1 x n per-factor attribution, sums to 1
};

// Key-scored fusion: s = h*K^T, alpha = softmax(s), c = alpha*P,
// z = concat(h, c)*W_f + b_f. Gradients reach P, K, W_f and b_f.
Fused fuse(Value h, const BoundBank& bank);

// Mean squared pairwise cosine of the prompt rows:
//   p_hat_i = p_i / (|p_i| + 1e-12)
//   L = 2/(n(n-1)) * sum_{i<j} (p_hat_i . p_hat_j)^2,  0 when n == 1.
// In [0,1]; 0 iff all row pairs are orthogonal; invariant under positive
// rescaling of any row.
Value orthogonality_penalty(Value P);
double orthogonality_penalty(const Matrix& P);  // plain evaluation, same formula

}  // namespace spo

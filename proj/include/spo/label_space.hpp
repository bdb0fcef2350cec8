#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "spo/autodiff.hpp"
#include "spo/matrix.hpp"

namespace spo {

enum class AlignMode { literal, contrastive };

// Structured label embeddings: frozen attribute indicators Q times trainable
// attribute embeddings M give the label matrix E = Q*M; W projects the fused
// representation into the label space.
struct LabelSpace {
  std::size_t C = 0;    // classes
  std::size_t A = 0;    // attribute vocabulary size
  std::size_t d_e = 0;  // label embedding dimension
  std::size_t d_z = 0;  // fused representation dimension
  std::vector<std::string> label_names;
  std::vector<std::string> attribute_names;  // vocabulary, first-appearance order
  Matrix Q;  // C x A, frozen; each row sums to 1
  Matrix M;  // A x d_e, trainable
  Matrix W;  // d_e x d_z, trainable
};

// attributes is either empty (then Q = I_C and the labels double as the
// attribute vocabulary) or one non-empty list per label. Q[i][a] =
// 1/|attrs(i)| on label i's attributes. M ~ Normal(0, 1/sqrt(d_e)),
// W ~ Normal(0, 1/sqrt(d_z)).
LabelSpace build_label_space(const std::vector<std::string>& labels,
                             const std::vector<std::vector<std::string>>& attributes,
                             std::uint64_t seed, std::size_t d_e, std::size_t d_z);

struct BoundLabels {
  Value Q;  // constant
  Value M;  // trainable
  Value W;  // trainable
  Value E;  // Q*M, C x d_e
};

BoundLabels bind(Tape& tape, const LabelSpace& space, bool trainable = true);

// u = z * W^T, the latent point moved into the label space.
Value project(Value z, const BoundLabels& labels);

// softmax over per-label scores e_i . u. Equals softmax(E W z^T) read as a row.
Value score(Value z, const BoundLabels& labels);

// Distance d(u, e_i) = |u - e_i|^2 / d_e.
// literal:     sum_i d(u, e_i)                      (sums the gold label too)
// contrastive: d(u, e_gold) + mean over i != gold of max(0, margin - d(u, e_i))
Value alignment_loss(Value z, std::size_t gold, const BoundLabels& labels, AlignMode mode,
                     double margin);

}  // namespace spo

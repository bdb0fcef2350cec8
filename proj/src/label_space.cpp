#include "spo/label_space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "spo/error.hpp"
#include "spo/rng.hpp"

namespace spo {

LabelSpace build_label_space(const std::vector<std::string>& labels,
                             const std::vector<std::vector<std::string>>& attributes,
                             std::uint64_t seed, std::size_t d_e, std::size_t d_z) {
  if (labels.size() < 2) throw ConfigError("label space: need at least 2 labels");
  if (d_e < 1 || d_z < 1) throw ConfigError("label space: dimensions must be >= 1");
  LabelSpace s;
  s.C = labels.size();
  s.d_e = d_e;
  s.d_z = d_z;
  s.label_names = labels;

  if (attributes.empty()) {
    // No declared attributes: identity indicators, one free embedding per label.
    s.A = s.C;
    s.attribute_names = labels;
    s.Q = Matrix::identity(s.C);
  } else {
    if (attributes.size() != s.C) {
      throw ConfigError("label space: attribute lists do not cover every label");
    }
    std::unordered_map<std::string, std::size_t> vocab;
    for (std::size_t i = 0; i < s.C; ++i) {
      if (attributes[i].empty()) {
        throw ConfigError("label space: label \"" + labels[i] + "\" has no attributes");
      }
      std::unordered_set<std::string> seen;
      for (const std::string& a : attributes[i]) {
        if (!seen.insert(a).second) {
          throw ConfigError("label space: duplicate attribute \"" + a + "\" on label \"" +
                            labels[i] + "\"");
        }
        if (vocab.find(a) == vocab.end()) {
          vocab.emplace(a, s.attribute_names.size());
          s.attribute_names.push_back(a);
        }
      }
    }
    s.A = s.attribute_names.size();
    s.Q = Matrix(s.C, s.A);
    for (std::size_t i = 0; i < s.C; ++i) {
      const double w = 1.0 / static_cast<double>(attributes[i].size());
      for (const std::string& a : attributes[i]) s.Q.at(i, vocab.at(a)) = w;
    }
  }

  s.M = Matrix(s.A, d_e);
  s.W = Matrix(d_e, d_z);
  Rng rng(seed);
  const double s_m = 1.0 / std::sqrt(static_cast<double>(d_e));
  const double s_w = 1.0 / std::sqrt(static_cast<double>(d_z));
  for (std::size_t i = 0; i < s.M.size(); ++i) s.M[i] = rng.normal(s_m);
  for (std::size_t i = 0; i < s.W.size(); ++i) s.W[i] = rng.normal(s_w);
  return s;
}

BoundLabels bind(Tape& tape, const LabelSpace& space, bool trainable) {
  BoundLabels b;
  b.Q = tape.constant(space.Q);
  if (trainable) {
    b.M = tape.parameter(space.M);
    b.W = tape.parameter(space.W);
  } else {
    b.M = tape.constant(space.M);
    b.W = tape.constant(space.W);
  }
  b.E = matmul(b.Q, b.M);
  return b;
}

Value project(Value z, const BoundLabels& labels) {
  const Matrix& w = labels.W.val();
  if (z.val().rows() != 1 || z.val().cols() != w.cols()) {
    throw ShapeError("project: z is " + z.val().shape_str() + ", W is " + w.shape_str());
  }
  return matmul(z, transpose(labels.W));
}

Value score(Value z, const BoundLabels& labels) {
  Value u = project(z, labels);
  Value logits = matmul(u, transpose(labels.E));
  return softmax_row(logits);
}

Value alignment_loss(Value z, std::size_t gold, const BoundLabels& labels, AlignMode mode,
                     double margin) {
  const std::size_t C = labels.E.val().rows();
  const std::size_t d_e = labels.E.val().cols();
  if (gold >= C) {
    throw IndexError("alignment_loss: gold " + std::to_string(gold) + " out of range for C=" +
                     std::to_string(C));
  }
  if (margin < 0.0) throw UsageError("alignment_loss: margin must be >= 0");

  Value u = project(z, labels);
  const double inv_de = 1.0 / static_cast<double>(d_e);
  std::vector<Value> dist(C);
  for (std::size_t i = 0; i < C; ++i) {
    dist[i] = scale(sum_squares(sub(u, row(labels.E, i))), inv_de);
  }

  if (mode == AlignMode::literal) {
    Value total = dist[0];
    for (std::size_t i = 1; i < C; ++i) total = add(total, dist[i]);
    return total;
  }

  // Contrastive: pull toward the gold embedding, push the rest outside the
  // margin.
  Value pull = dist[gold];
  Value push;
  bool have_push = false;
  for (std::size_t i = 0; i < C; ++i) {
    if (i == gold) continue;
    Value hinge = relu(affine(dist[i], -1.0, margin));
    push = have_push ? add(push, hinge) : hinge;
    have_push = true;
  }
  return add(pull, scale(push, 1.0 / static_cast<double>(C - 1)));
}

}  // namespace spo

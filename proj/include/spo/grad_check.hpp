#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "spo/autodiff.hpp"
#include "spo/matrix.hpp"

namespace spo {

// A scalar-valued computation expressed as a tape builder: given a fresh
// tape and the parameters already registered on it, return the scalar root.
// The same builder serves both sides of the check: the analytic gradient
// comes from one backward pass, the numeric one from forward-only central
// differences on perturbed copies.
using TapeFn = std::function<Value(Tape&, const std::vector<Value>&)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_coord = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central differences with the given step on 64-bit reals. Relative error
// per coordinate is |g_a - g_n| / max(|g_a| + |g_n|, 1e-8); the report
// carries the maximum over all coordinates of all parameters.
GradCheckReport grad_check(const TapeFn& f, const std::vector<Matrix>& params,
                           double step = 1e-5);

}  // namespace spo

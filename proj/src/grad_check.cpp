#include "spo/grad_check.hpp"

#include <cmath>

#include "spo/error.hpp"

namespace spo {

namespace {

double eval_forward(const TapeFn& f, const std::vector<Matrix>& params) {
  Tape tape;
  std::vector<Value> handles;
  handles.reserve(params.size());
  for (const Matrix& p : params) handles.push_back(tape.parameter(p));
  const double v = f(tape, handles).scalar();
  if (!std::isfinite(v)) throw NumericError("grad_check: function returned a non-finite value");
  return v;
}

}  // namespace

GradCheckReport grad_check(const TapeFn& f, const std::vector<Matrix>& params, double step) {
  // Analytic side: one tape, one backward pass.
  Tape tape;
  std::vector<Value> handles;
  handles.reserve(params.size());
  for (const Matrix& p : params) handles.push_back(tape.parameter(p));
  Value root = f(tape, handles);
  tape.backward(root);
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Value h : handles) analytic.push_back(tape.grad(h));

  // Numeric side: forward evaluations on perturbed parameter copies.
  GradCheckReport report;
  std::vector<Matrix> work = params;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    for (std::size_t ci = 0; ci < params[pi].size(); ++ci) {
      const double orig = work[pi][ci];
      work[pi][ci] = orig + step;
      const double up = eval_forward(f, work);
      work[pi][ci] = orig - step;
      const double down = eval_forward(f, work);
      work[pi][ci] = orig;

      const double g_num = (up - down) / (2.0 * step);
      const double g_ana = analytic[pi][ci];
      const double denom = std::max(std::abs(g_ana) + std::abs(g_num), 1e-8);
      const double rel = std::abs(g_ana - g_num) / denom;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = pi;
        report.worst_coord = ci;
        report.analytic = g_ana;
        report.numeric = g_num;
      }
    }
  }
  return report;
}

}  // namespace spo

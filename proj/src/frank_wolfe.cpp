#include "rtst/frank_wolfe.hpp"

#include <cmath>
#include <limits>

namespace rtst {
namespace {

double unsmoothed(const Vector& c, const Matrix& q, const Vector& v) {
  return c.dot(v) + (q.transpose() * v).norm();
}

}  // namespace

FwResult fw_solve(const LpProblem& polytope, const Matrix& q,
                  const FwOptions& opts) {
  if (polytope.sense != LpSense::Minimize)
    throw ValidationError("fw_solve: expects a minimization polytope");
  if (q.rows() != polytope.var_count())
    throw ValidationError("fw_solve: norm matrix row count mismatch");
  const Vector& c = polytope.objective;
  const double mu = 1e-7 * (1.0 + q.norm());

  const auto lmo = [&](const Vector& direction) {
    LpProblem sub = polytope;
    sub.objective = direction;
    const LpResult r = lp_solve(sub);
    if (r.status == LpStatus::Unbounded)
      throw NumericalError("fw_solve: polytope is unbounded");
    return r;
  };

  FwResult out;
  const LpResult start = lmo(c);
  if (start.status == LpStatus::Infeasible) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  Vector v = start.x;
  const auto smoothed = [&](const Vector& w) {
    return c.dot(w) + std::sqrt((q.transpose() * w).squaredNorm() + mu * mu) - mu;
  };
  const auto gradient = [&](const Vector& w) {
    const Vector qw = q.transpose() * w;
    return Vector(c + q * (qw / std::sqrt(qw.squaredNorm() + mu * mu)));
  };

  double lower = -std::numeric_limits<double>::infinity();
  out.x = v;
  out.value = unsmoothed(c, q, v);
  for (int t = 0; t < opts.max_iters; ++t) {
    out.iterations = t + 1;
    const Vector g = gradient(v);
    const LpResult step = lmo(g);
    const Vector& s = step.x;
    lower = std::max(lower, smoothed(v) + g.dot(s - v));
    const double fv = unsmoothed(c, q, v);
    if (fv < out.value) {
      out.value = fv;
      out.x = v;
    }
    if (out.value - lower <= opts.gap_tol_scale * (1.0 + std::abs(out.value)))
      break;
    const Vector d = s - v;
    if (d.squaredNorm() <= 0.0) break;
    // exact line search on the segment: derivative of the smoothed objective
    // is nondecreasing, bisect on its sign
    const auto deriv = [&](double t_step) {
      const Vector w = v + t_step * d;
      const Vector qw = q.transpose() * w;
      return c.dot(d) +
             qw.dot(q.transpose() * d) / std::sqrt(qw.squaredNorm() + mu * mu);
    };
    double step_len = 1.0;
    if (deriv(0.0) >= 0.0) {
      step_len = 0.0;
    } else if (deriv(1.0) > 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? hi : lo) = mid;
      }
      step_len = 0.5 * (lo + hi);
    }
    if (step_len <= 0.0) break;
    v += step_len * d;
  }
  const double fv = unsmoothed(c, q, v);
  if (fv < out.value) {
    out.value = fv;
    out.x = v;
  }
  out.lower_bound = std::min(lower, out.value);
  out.gap = out.value - out.lower_bound;
  return out;
}

}  // namespace rtst

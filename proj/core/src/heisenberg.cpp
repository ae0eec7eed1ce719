#include "nilflow/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "nilflow/errors.hpp"

namespace nilflow {

double wrap_unit(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

HeisElt canonicalize(const HeisElt& g) {
  double x = g.x, y = g.y, z = g.z;
  // (0, n, 0) * (x, y, z) = (x, y + n, z + n x)
  for (int pass = 0; pass < 2; ++pass) {
    double n = std::floor(y);
    if (n != 0.0) {
      y -= n;
      z -= n * x;
    }
    if (y >= 1.0) {
      y -= 1.0;
      z -= x;
    }
  }
  for (int pass = 0; pass < 2; ++pass) {
    double n = std::floor(x);
    if (n != 0.0) x -= n;
    if (x >= 1.0) x -= 1.0;
  }
  z = signed_frac(z);
  return {x, y, z};
}

PhasePoint PhasePoint::make(double t, const HeisElt& g) {
  return {wrap_unit(t), NilPoint::from(g)};
}

double kappa_norm_sym(const HeisElt& D) {
  double c = std::min(frac_dist(D.z - D.x * D.y), frac_dist(D.z));
  return std::max({std::fabs(D.x), std::fabs(D.y), c});
}

double dist_nil_upper(const NilPoint& p, const NilPoint& q, int window) {
  if (window < 1) throw InputError("dist_nil_upper: window must be >= 1");
  // Evaluate in a fixed order so the result is bitwise symmetric.
  const bool swap = std::tie(q.rep().x, q.rep().y, q.rep().z) < std::tie(p.rep().x, p.rep().y, p.rep().z);
  const HeisElt& a = swap ? q.rep() : p.rep();
  const HeisElt& b = swap ? p.rep() : q.rep();
  // a^-1 (m1, m2, 0) b expanded by hand
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double z0 = a.x * a.y - a.z + b.z - a.y * b.x;
  double best = std::numeric_limits<double>::infinity();
  for (int m1 = -window; m1 <= window; ++m1) {
    const double X = dx + m1;
    // |x(D)| alone already bounds the value from below
    if (std::fabs(X) >= best) continue;
    for (int m2 = -window; m2 <= window; ++m2) {
      const double Y = dy + m2;
      if (std::fabs(Y) >= best) continue;
      HeisElt D{X, Y, z0 - a.y * m1 + m2 * b.x};
      best = std::min(best, kappa_norm_sym(D));
    }
  }
  return best;
}

double dist_phase(const PhasePoint& u, const PhasePoint& v, int window) {
  double dt = frac_dist(u.t - v.t);
  double dn = dist_nil_upper(u.p, v.p, window);
  return std::sqrt(dt * dt + dn * dn);
}

double dist_bound_eqdGammaG(const HeisElt& g, const HeisElt& gs, const HeisElt& Y, const HeisElt& Ys) {
  const double x = g.x, y = g.y, z = g.z;
  const double xs = gs.x, ys = gs.y, zs = gs.z;
  const double a = Y.x, b = Y.y, c = Y.z;
  const double as = Ys.x, bs = Ys.y, cs = Ys.z;
  return (1 + std::fabs(y) + std::fabs(b)) * std::fabs(xs - x) + (1 + std::fabs(a)) * std::fabs(ys - y) +
         std::fabs(zs - z) + (1 + std::fabs(b)) * std::fabs(a - as) + std::fabs(b - bs) +
         frac_dist(cs - c);
}

bool same_coset(const NilPoint& p, const NilPoint& q, double tol) {
  return dist_nil_upper(p, q, 1) <= tol;
}

}  // namespace nilflow

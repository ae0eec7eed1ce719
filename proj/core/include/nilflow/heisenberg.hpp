#pragma once

#include <array>
#include <cmath>

#include "nilflow/numtheory.hpp"

namespace nilflow {

// The matrix (1 y z; 0 1 x; 0 0 1).
template <class T>
struct BasicHeisElt {
  T x{0}, y{0}, z{0};

  static BasicHeisElt identity() { return {T(0), T(0), T(0)}; }
  static BasicHeisElt central(T c) { return {T(0), T(0), c}; }
  friend bool operator==(const BasicHeisElt&, const BasicHeisElt&) = default;
};

template <class T>
BasicHeisElt<T> mul(const BasicHeisElt<T>& g, const BasicHeisElt<T>& h) {
  return {g.x + h.x, g.y + h.y, g.z + h.z + g.y * h.x};
}

template <class T>
BasicHeisElt<T> inv(const BasicHeisElt<T>& g) {
  return {-g.x, -g.y, g.x * g.y - g.z};
}

template <class T>
std::array<T, 3> kappa(const BasicHeisElt<T>& g) {
  return {g.x, g.y, g.z - g.x * g.y};
}

using HeisElt = BasicHeisElt<double>;

// Coset representative with x, y in [0, 1) and z in (-1/2, 1/2].
HeisElt canonicalize(const HeisElt& g);

class NilPoint {
 public:
  NilPoint() = default;
  static NilPoint from(const HeisElt& g) { return NilPoint(canonicalize(g)); }
  const HeisElt& rep() const noexcept { return rep_; }
  // The coset of rep() * Y.
  NilPoint right_mul(const HeisElt& Y) const { return from(mul(rep_, Y)); }
  friend bool operator==(const NilPoint&, const NilPoint&) = default;

 private:
  explicit NilPoint(const HeisElt& g) : rep_(g) {}
  HeisElt rep_{};
};

struct PhasePoint {
  double t = 0;  // in [0, 1)
  NilPoint p;
  static PhasePoint make(double t, const HeisElt& g);
};

// Reduces t into [0, 1).
double wrap_unit(double t);

inline constexpr int kDefaultWindow = 3;

// max(|x|, |y|, min(||z - xy||, ||z||)), i.e. the smaller of the kappa norms
// of D and D^-1. See dist_nil_upper.
double kappa_norm_sym(const HeisElt& D);

// Minimum of kappa_norm_sym(rep(p)^-1 gamma rep(q)) over lattice elements
// gamma with non-central entries in [-window, window]; the centre is reduced
// exactly by <.>.
double dist_nil_upper(const NilPoint& p, const NilPoint& q, int window = kDefaultWindow);

double dist_phase(const PhasePoint& u, const PhasePoint& v, int window = kDefaultWindow);

// Right-hand side of the explicit bound for d(g Y, g* Y*), with
// g = (x, y, z) and Y = (1 b c; 1 a; 1), i.e. a in the x slot, b in the y slot.
double dist_bound_eqdGammaG(const HeisElt& g, const HeisElt& gs, const HeisElt& Y, const HeisElt& Ys);

// True iff p and q are the same coset up to `tol` in every coordinate.
bool same_coset(const NilPoint& p, const NilPoint& q, double tol = 0.0);

}  // namespace nilflow

#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nilflow/expsum.hpp"
#include "nilflow/numtheory.hpp"

namespace nilflow {

// |f-hat(m)| <= C |m|^-r for every stored m != 0.
struct DecayClass {
  double r = 0.0;
  double C = std::numeric_limits<double>::infinity();
};

struct Mode {
  long long m;
  cplx c;
};

class PeriodicFn {
 public:
  PeriodicFn() = default;

  // Validates the decay certificate (if any) and, when `real` is set,
  // the conjugate symmetry f-hat(-m) = conj(f-hat(m)). Throws InputError.
  static PeriodicFn make(std::vector<Mode> modes, cplx mean = {0, 0},
                         std::optional<DecayClass> decay = std::nullopt, bool real = false);
  static PeriodicFn constant(cplx c);
  // amp * cos(2 pi m t), amp * sin(2 pi m t), amp * e(m t)
  static PeriodicFn cos_mode(long long m, double amp = 1.0);
  static PeriodicFn sin_mode(long long m, double amp = 1.0);
  static PeriodicFn exp_mode(long long m, cplx amp = {1, 0});

  cplx eval(long double t) const;
  double eval_re(long double t) const { return eval(t).real(); }

  cplx coeff(long long m) const;
  cplx mean() const noexcept { return mean_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }  // sorted, nonzero m
  const std::optional<DecayClass>& decay() const noexcept { return decay_; }
  bool is_real() const noexcept { return real_; }
  bool is_zero() const noexcept { return modes_.empty() && mean_ == cplx{0, 0}; }
  long long max_freq() const noexcept;

  // Sum of |coefficients|, an upper bound for sup |f|.
  double sup_bound() const;
  // Integral of |f|^2 over a period.
  double l2_norm2() const;
  // Smallest C with |f-hat(m)| <= C |m|^-r on the stored spectrum.
  double certificate_constant(double r) const;

  PeriodicFn with_decay(std::optional<DecayClass> d) const;
  PeriodicFn without_mean() const;
  // f o l_alpha, i.e. t -> f(t + alpha)
  PeriodicFn shifted(const RotationNumber& alpha) const;

  friend PeriodicFn operator+(const PeriodicFn& f, const PeriodicFn& g);
  friend PeriodicFn operator-(const PeriodicFn& f, const PeriodicFn& g);
  friend PeriodicFn operator*(cplx s, const PeriodicFn& f);
  // Exact convolution of the two spectra.
  friend PeriodicFn product(const PeriodicFn& f, const PeriodicFn& g);

  std::string describe() const;

 private:
  std::vector<Mode> modes_;
  cplx mean_{0, 0};
  std::optional<DecayClass> decay_;
  bool real_ = true;  // the default object is the zero function
};

// Throws InputError naming `what` if f has a nonzero mean.
void require_zero_mean(const PeriodicFn& f, const std::string& what, double tol = 1e-15);

struct ResonantSplit {
  PeriodicFn plus;     // spectrum in M1(B), carries the mean
  PeriodicFn minus;    // spectrum in M2(B)
  PeriodicFn cobound;  // g with g(t + alpha) - g(t) = minus(t)
};

ResonantSplit split_resonant(const PeriodicFn& f, const IndexSets& sets, const RotationNumber& alpha);

struct AvgDefect {
  double defect = 0;       // max over the t-grid
  double at_t = 0;
  double comparison = 0;   // q^-B
  long long q = 0;
};

// max_t |(1/q) sum_{j=0}^{q} f(t + j alpha) - f-hat(0)| on an equispaced grid.
// The sum has q + 1 terms on purpose.
AvgDefect birkhoff_avg_defect(const PeriodicFn& f, const RotationNumber& alpha, long long q,
                              double B = 3.0, int grid_points = 64);

}  // namespace nilflow

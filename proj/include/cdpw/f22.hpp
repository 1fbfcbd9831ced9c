#pragma once

// 2F2(a, a; a+l+1, a-l; z): series, three closed representations, and the
// large-|z| expansion with its coefficient sequence d_n.

#include <optional>
#include <utility>
#include <vector>

#include "cdpw/core.hpp"
#include "cdpw/special_fns.hpp"

namespace cdpw::f22 {

struct F22Args {
  Complex a;
  int l = 0;
  Complex z;

  /// Throws DomainError for l < 0, non-finite input, a within 1e-8 of an
  /// integer, or z == 0 when `need_nonzero_z`.
  void validate(bool need_nonzero_z) const;
  /// validate(true) plus 0 < Re(a) < l + 2.
  void validate_asymptotic() const;
};

EvalResult f22_series(const F22Args& args, const SeriesControl& ctl = {});

/// sum_{k<=l} (-1)^k C(l,k) (l+1)_k / (a)_{k+1} 1F1(a; a+k+1; z).  Redone in
/// extended precision when its terms cancel; cancellation_warning is set only
/// if that fails.
EvalResult kummer_sum(Complex a, int l, Complex z, const SeriesControl& ctl = {});

/// Finite combination of 1F1(a; a+k+1; z), k = 0..l.
EvalResult f22_form_a(const F22Args& args, const SeriesControl& ctl = {});

/// sum_{k<=l} C(l,k) (l+1)_k / k! gamma(a+k, -z) z^{-k}.  Redone in extended
/// precision when its terms cancel; cancellation_warning is set only if that
/// fails.
EvalResult inc_gamma_sum(Complex a, int l, Complex z, const SeriesControl& ctl = {});

/// Finite combination of gamma(a+k, -z).
EvalResult f22_form_b(const F22Args& args, const SeriesControl& ctl = {});

/// Gamma(a) 3F1(a, -l, l+1; 1; -1/z).
Complex kappa_plus(Complex a, int l, Complex z);

/// (-1)^{l+1} sum_n (l+n)!/(n!(l-n)!) (-1)^n z^{-n} U(1-a, 1-a-n, -z).
Complex kappa_minus(Complex a, int l, Complex z);
EvalResult kappa_minus_eval(Complex a, int l, Complex z, double rel_tol = 1e-13);

/// kappa_plus + e^z kappa_minus.  When the two parts cancel the sum is redone
/// in extended precision; cancellation_warning is set only if that fails.
EvalResult kappa_combination(Complex a, int l, Complex z);

/// (a)_{l+1}/(1-a)_l (-z)^{-a} (kappa_plus + e^z kappa_minus).
EvalResult f22_form_c(const F22Args& args);

struct AsymCoeffs {
  Complex a;
  int l = 0;
  std::vector<Complex> d;  // d_0 .. d_N
};

/// d_0..d_N from the three-term recursion.
AsymCoeffs d_coeffs_recursive(Complex a, int l, int N);

/// (1-a)_n (a)_l / (2^n (a-n)_l) 3F2(-l, -l, -n; 1, 1-a-l; 1).
Complex d_coeff_closed(Complex a, int l, int n);

struct AsymptoticOptions {
  double min_abs_z = 5.0;
  int scan_terms = 400;  // window searched for the smallest term
};

/// The two pieces of the large-|z| expansion and the combined result.
struct AsymptoticParts {
  Complex first;   // (a)_{l+1}/(1-a)_l (-z)^{-a} kappa_plus, exact
  Complex second;  // (-1)^l (a)_{l+1}/(1-a)_l e^z/z sum_n 2^n d_n z^{-n}, truncated
  EvalResult result;
};

/// N = nullopt truncates before the smallest term.  An explicit N past the
/// onset of divergence throws DivergenceOnset carrying the optimal N.
AsymptoticParts f22_asymptotic_parts(const F22Args& args, std::optional<int> N = std::nullopt,
                                     const AsymptoticOptions& opt = {});
EvalResult f22_asymptotic(const F22Args& args, std::optional<int> N = std::nullopt,
                          const AsymptoticOptions& opt = {});

/// |LHS - RHS| / (|LHS| + |RHS| + 1) for the finite 1F1 / 3F1 identity.
double prop1_residual(Complex a, int l, Complex z);

/// (numeric, analytic): (1-a)_l * form_c at a = 1 + eps (1+i)/sqrt2, and
/// i^l (l+1)! e^{z/2} j_l(iz/2).
std::pair<Complex, Complex> chargeless_limit(int l, Complex z, double eps);

struct RoutingThresholds {
  double form_a_max_abs_z = 2.0;
  int form_a_max_l = 4;
  double series_max_abs_z = 25.0;
  double form_c_max_abs_z = 60.0;
  double series_l_ratio = 0.5;       // series also when l > ratio * |z|
  double series_hard_max_abs_z = 400.0;
};

/// Picks a representation by |z| and l (see RoutingThresholds).
EvalResult f22_auto(const F22Args& args, const RoutingThresholds& thr = {},
                    const SeriesControl& ctl = {});

}  // namespace cdpw::f22

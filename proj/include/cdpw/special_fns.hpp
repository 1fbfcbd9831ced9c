#pragma once

// Complex-argument special functions shared by the 2F2 and partial-wave layers.
// Principal branches throughout: z^a = exp(a Log z), arg z in (-pi, pi].

#include "cdpw/core.hpp"

namespace cdpw::sf {

Complex pochhammer(Complex a, int n);

Complex gamma_complex(Complex z);

/// 1/Gamma(z); zero at the poles instead of an error.
Complex reciprocal_gamma(Complex z);

Complex digamma(Complex z);

/// Principal power z^a.
inline Complex cpow(Complex z, Complex a) { return std::exp(a * std::log(z)); }

/// Kummer M(a;b;z) = 1F1(a;b;z) by its Maclaurin series.
///
/// The sum is first accumulated in double with compensation. When the running
/// error estimate shows that cancellation between terms would cost more than
/// the requested tolerance, the series is re-summed in extended precision,
/// so the returned value is accurate for large |z| as well.
EvalResult kummer_m(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// Lower incomplete gamma gamma(a, z) = a^{-1} z^a M(a; a+1; -z).
Complex lower_inc_gamma(Complex a, Complex z, const SeriesControl& ctl = {});

struct KummerUOptions {
  double asymptotic_threshold = 30.0;  // |z| above which the large-z expansion is tried first
  double rel_tol = 1e-12;              // accuracy that triggers a switch to the other regime
  SeriesControl series{};
};

/// Tricomi U(a, b, z): connection formula at moderate |z|, optimally truncated
/// large-|z| expansion above the threshold.  Integer b uses the logarithmic
/// limit form; terminating parameter sets are summed exactly.
EvalResult kummer_u_eval(Complex a, Complex b, Complex z, const KummerUOptions& opt = {});

inline Complex kummer_u(Complex a, Complex b, Complex z, const KummerUOptions& opt = {}) {
  return kummer_u_eval(a, b, z, opt).value;
}

Complex spherical_bessel_j(int l, Complex z);

/// 3F1(a, -l, l+1; 1; x), a polynomial of degree l in x.
Complex terminating_3f1(Complex a, int l, Complex x);

/// 3F2(-l, -l, -n; 1, 1-a-l; 1), a finite sum over m = 0..min(l, n).
Complex terminating_3f2_unit(int l, int n, Complex a);

/// Binomial coefficient as a double (exact for the sizes used here).
double binomial(int n, int k);

}  // namespace cdpw::sf

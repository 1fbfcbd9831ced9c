#pragma once

#include <span>

#include "cdpw/core.hpp"
#include "../detail/mp_complex.hpp"

namespace cdpw::detail {

/// Maclaurin sum of  sum_n prod_i (num_i)_n / prod_j (den_j)_n  z^n / n!.
///
/// Convergence: |term| / |partial sum| < ctl.rel_tol for three consecutive terms.
/// A compensated double pass runs first; if its rounding estimate exceeds a
/// tenth of the tolerance the series is re-summed with MPFR at a precision
/// sized from the observed ratio between the largest term and the sum.
/// `where` names the caller in error messages.
EvalResult hypergeometric_series(std::span<const Complex> num, std::span<const Complex> den,
                                 Complex z, const SeriesControl& ctl, const char* where);

struct MpSeriesInfo {
  bool converged = false;
  int terms = 0;
  double log2_max_term = 0.0;
  double log2_last_term = kNegInf;
};

/// The same Maclaurin sum at the precision of `sum`, written to `sum`.
MpSeriesInfo hypergeometric_series_mp(std::span<const Complex> num, std::span<const Complex> den,
                                      const MpComplex& z, double rel_tol, int max_terms,
                                      MpComplex& sum);

/// As above with parameters already held at extended precision.
MpSeriesInfo hypergeometric_series_mp(std::span<const MpComplex* const> num,
                                      std::span<const MpComplex* const> den, const MpComplex& z,
                                      double rel_tol, int max_terms, MpComplex& sum);

}  // namespace cdpw::detail

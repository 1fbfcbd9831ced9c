#include "hypergeometric_series.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace cdpw::detail {
namespace {

struct PassResult {
  Complex value;
  int terms = 0;
  bool converged = false;
  double log2_max_term = 0.0;
  double log2_sum = 0.0;
  double log2_last_term = kNegInf;
};

PassResult sum_extended(std::span<const Complex> num, std::span<const Complex> den, Complex z,
                        const SeriesControl& ctl, mpfr_prec_t prec) {
  MpComplex zz(prec), sum(prec);
  zz.set(z);
  const MpSeriesInfo info = hypergeometric_series_mp(num, den, zz, ctl.rel_tol, ctl.max_terms, sum);
  PassResult out;
  out.converged = info.converged;
  out.terms = info.terms;
  out.log2_max_term = info.log2_max_term;
  out.log2_last_term = info.log2_last_term;
  out.value = sum.value();
  out.log2_sum = sum.log2_abs();
  return out;
}

}  // namespace

MpSeriesInfo hypergeometric_series_mp(std::span<const Complex> num, std::span<const Complex> den,
                                      const MpComplex& z, double rel_tol, int max_terms,
                                      MpComplex& sum) {
  const mpfr_prec_t prec = sum.prec();
  std::vector<std::unique_ptr<MpComplex>> store;
  std::vector<const MpComplex*> a, b;
  for (Complex p : num) {
    store.push_back(std::make_unique<MpComplex>(prec));
    store.back()->set(p);
    a.push_back(store.back().get());
  }
  for (Complex p : den) {
    store.push_back(std::make_unique<MpComplex>(prec));
    store.back()->set(p);
    b.push_back(store.back().get());
  }
  return hypergeometric_series_mp(a, b, z, rel_tol, max_terms, sum);
}

MpSeriesInfo hypergeometric_series_mp(std::span<const MpComplex* const> num,
                                      std::span<const MpComplex* const> den, const MpComplex& z,
                                      double rel_tol, int max_terms, MpComplex& sum) {
  const mpfr_prec_t prec = sum.prec();
  std::vector<std::unique_ptr<MpComplex>> a, b;
  for (const MpComplex* p : num) {
    a.push_back(std::make_unique<MpComplex>(prec));
    a.back()->set(*p);
  }
  for (const MpComplex* p : den) {
    b.push_back(std::make_unique<MpComplex>(prec));
    b.back()->set(*p);
  }
  MpComplex term(prec), numer(prec), denom(prec);
  MpScratch scratch(prec);
  term.set(Complex{1.0, 0.0});
  sum.set(Complex{1.0, 0.0});

  const double log2_tol = std::log2(rel_tol);
  MpSeriesInfo out;
  out.log2_max_term = 0.0;
  int small_run = 0;
  int n = 0;
  for (; n < max_terms; ++n) {
    numer.set(z);
    for (auto& p : a) scratch.mul(numer, *p);
    denom.set(Complex{static_cast<double>(n + 1), 0.0});
    for (auto& p : b) scratch.mul(denom, *p);
    scratch.mul(term, numer);
    if (term.is_zero()) {  // numerator parameter reached zero: exact termination
      out.converged = true;
      out.log2_last_term = kNegInf;
      ++n;
      break;
    }
    scratch.div(term, denom);
    sum.add(term);
    for (auto& p : a) p->add_ui(1);
    for (auto& p : b) p->add_ui(1);

    const double lt = term.log2_abs();
    const double ls = sum.log2_abs();
    out.log2_max_term = std::max(out.log2_max_term, lt);
    out.log2_last_term = lt;
    if (lt == kNegInf || lt <= log2_tol + ls) {
      if (++small_run >= 3) {
        out.converged = true;
        ++n;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  out.terms = n + 1;
  return out;
}

EvalResult hypergeometric_series(std::span<const Complex> num, std::span<const Complex> den,
                                 Complex z, const SeriesControl& ctl, const char* where) {
  ctl.validate();
  for (Complex b : den) {
    if (near_nonpositive_integer(b)) {
      // A numerator zero that arrives first terminates the series before the pole.
      bool terminates = false;
      for (Complex a : num)
        if (is_nonpositive_integer(a) && -a.real() < -std::round(b.real())) terminates = true;
      if (!terminates)
        throw DomainError(std::string(where) + ": denominator parameter at a non-positive integer");
    }
  }
  if (!is_finite(z)) throw DomainError(std::string(where) + ": non-finite argument");

  // Compensated double pass.
  CompensatedSum sum;
  Complex term{1.0, 0.0};
  sum.add(term);
  double max_abs = 1.0;
  double weighted = 1.0;  // sum of (n+1)|t_n|: bound on accumulated recurrence error
  bool overflow = false;
  bool converged = false;
  int small_run = 0;
  int n = 0;
  for (; n < ctl.max_terms; ++n) {
    Complex r = z / static_cast<double>(n + 1);
    for (Complex a : num) r *= a + static_cast<double>(n);
    if (r == Complex{}) {  // numerator parameter reached zero: exact termination
      term = Complex{};
      converged = true;
      ++n;
      break;
    }
    for (Complex b : den) r /= b + static_cast<double>(n);
    term *= r;
    sum.add(term);
    const double at = std::abs(term);
    if (!std::isfinite(at)) {
      overflow = true;
      break;
    }
    max_abs = std::max(max_abs, at);
    weighted += static_cast<double>(n + 2) * at;
    if (at <= ctl.rel_tol * std::abs(sum.value())) {
      if (++small_run >= 3) {
        converged = true;
        ++n;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  const int terms_double = n + 1;
  const Complex s = sum.value();
  const double err_double = 4.0 * kEps * weighted + std::abs(term);
  if (converged && !overflow && err_double <= 0.1 * ctl.rel_tol * std::abs(s)) {
    EvalResult res;
    res.value = s;
    res.method = Method::Series;
    res.terms_used = terms_double;
    res.err_estimate = err_double + kEps * std::abs(s);
    return res;
  }
  if (!converged && !overflow)
    throw NumericalError(where, "series did not converge within " +
                                    std::to_string(ctl.max_terms) + " terms");

  // Extended-precision pass; precision grows until it covers the cancellation.
  const double log2_max_guess =
      overflow ? std::abs(z) * std::numbers::log2e : std::log2(max_abs);
  const double log2_sum_guess =
      overflow ? 0.0 : std::max(std::log2(std::abs(s) + 1e-300), log2_max_guess - 52.0);
  double need = 96.0 + std::max(0.0, log2_max_guess - log2_sum_guess) +
                2.0 * std::log2(static_cast<double>(terms_double) + 1.0);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const auto prec = static_cast<mpfr_prec_t>(std::ceil(need));
    const PassResult p = sum_extended(num, den, z, ctl, prec);
    if (!p.converged)
      throw NumericalError(where, "series did not converge within " +
                                      std::to_string(ctl.max_terms) + " terms");
    const double log2_n = std::log2(static_cast<double>(p.terms) + 1.0);
    const double required =
        80.0 + std::max(0.0, p.log2_max_term - p.log2_sum) + 2.0 * log2_n;
    if (required <= static_cast<double>(prec) || p.log2_sum == kNegInf) {
      EvalResult res;
      res.value = p.value;
      res.method = Method::Series;
      res.terms_used = p.terms;
      const double rounding =
          std::exp2(p.log2_max_term + 2.0 * log2_n - static_cast<double>(prec));
      const double last = (p.log2_last_term == kNegInf) ? 0.0 : std::exp2(p.log2_last_term);
      res.err_estimate = kEps * std::abs(p.value) + rounding + last;
      return res;
    }
    need = required + 32.0;
  }
  throw NumericalError(where, "cancellation could not be resolved in extended precision");
}

}  // namespace cdpw::detail

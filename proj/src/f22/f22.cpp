#include "cdpw/f22.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "../detail/truncation.hpp"
#include "../special_fns/hypergeometric_series.hpp"

namespace cdpw::f22 {
namespace {

constexpr double kDoubleAcceptance = 1e-13;

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

// (a)_{l+1} / (1-a)_l, shared by all closed forms.
Complex leading_ratio(Complex a, int l) {
  return sf::pochhammer(a, l + 1) / sf::pochhammer(1.0 - a, l);
}

// kappa_plus + e^z kappa_minus in extended precision.  Each U(1-a, 1-a-n, -z)
// is split by the connection formula into a Gamma(a) part and a (-z)^a part;
// the two groups are summed and joined at `prec` bits.
struct MpSplit {
  Complex value;
  double log2_scale = 0.0;  // log2 of the largest contribution before cancellation
  int terms = 0;
};

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpReal() { mpfr_clear(v_); }
  MpReal(const MpReal&) = delete;
  MpReal& operator=(const MpReal&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// out <- log(x), principal branch.
void log_mp(detail::MpComplex& out, const detail::MpComplex& x) {
  MpReal t(out.prec());
  mpfr_hypot(t.get(), x.re(), x.im(), MPFR_RNDN);
  mpfr_atan2(out.im(), x.im(), x.re(), MPFR_RNDN);
  mpfr_log(out.re(), t.get(), MPFR_RNDN);
}

// out <- x^a with the principal logarithm.
void pow_mp(detail::MpComplex& out, const detail::MpComplex& x, Complex a, detail::MpScratch& sc) {
  detail::MpComplex t(out.prec()), ac(out.prec());
  log_mp(t, x);
  ac.set(a);
  sc.mul(t, ac);
  sc.exp(out, t);
}

// out <- Gamma(a): upward shift to s = a + N, then the Stirling series for log Gamma(s).
void gamma_mp(detail::MpComplex& out, Complex a, detail::MpScratch& sc) {
  using detail::MpComplex;
  const mpfr_prec_t prec = out.prec();
  const int shift = std::max(0, static_cast<int>(std::ceil(0.12 * double(prec) + 10.0 - a.real())));
  MpComplex s(prec), poch(prec), f(prec), acc(prec), logs(prec), t(prec), pw(prec), s2inv(prec);
  poch.set(Complex{1.0, 0.0});
  for (int j = 0; j < shift; ++j) {
    f.set(a + double(j));
    sc.mul(poch, f);
  }
  s.set(a);
  s.add_ui(static_cast<unsigned long>(shift));
  log_mp(logs, s);

  // (s - 1/2) log s - s + log(2 pi) / 2
  acc.set(s);
  f.set(Complex{-0.5, 0.0});
  acc.add(f);
  sc.mul(acc, logs);
  acc.sub(s);
  MpReal r(prec), zeta(prec), fac(prec), twopi(prec);
  mpfr_const_pi(twopi.get(), MPFR_RNDN);
  mpfr_mul_2ui(twopi.get(), twopi.get(), 1, MPFR_RNDN);
  mpfr_log(r.get(), twopi.get(), MPFR_RNDN);
  mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDN);
  mpfr_add(acc.re(), acc.re(), r.get(), MPFR_RNDN);

  // B_{2k} / (2k (2k-1) s^{2k-1}) = (-1)^{k+1} 2 (2k-2)! zeta(2k) / ((2 pi)^{2k} s^{2k-1})
  pw.set(Complex{1.0, 0.0});
  sc.div(pw, s);
  s2inv.set(pw);
  sc.mul(s2inv, pw);
  const double stop = -double(prec) - 8.0;
  for (unsigned long k = 1;; ++k) {
    if (k > 4ul * static_cast<unsigned long>(prec)) throw NumericalError("gamma_mp", "Stirling series did not converge");
    mpfr_zeta_ui(zeta.get(), 2 * k, MPFR_RNDN);
    mpfr_fac_ui(fac.get(), 2 * k - 2, MPFR_RNDN);
    mpfr_mul(r.get(), zeta.get(), fac.get(), MPFR_RNDN);
    mpfr_mul_2ui(r.get(), r.get(), 1, MPFR_RNDN);
    mpfr_pow_ui(fac.get(), twopi.get(), 2 * k, MPFR_RNDN);
    mpfr_div(r.get(), r.get(), fac.get(), MPFR_RNDN);
    if (k % 2 == 0) mpfr_neg(r.get(), r.get(), MPFR_RNDN);
    t.set(pw);
    mpfr_mul(t.re(), t.re(), r.get(), MPFR_RNDN);
    mpfr_mul(t.im(), t.im(), r.get(), MPFR_RNDN);
    acc.add(t);
    if (t.log2_abs() < stop) break;
    sc.mul(pw, s2inv);
  }
  sc.exp(out, acc);
  sc.div(out, poch);
}

MpSplit kappa_split_mp(Complex a, int l, Complex z, mpfr_prec_t prec) {
  using detail::MpComplex;
  const double rel_tol = std::max(std::exp2(-static_cast<double>(prec) + 8.0), 1e-300);
  const int max_terms = 100000;
  detail::MpScratch sc(prec);
  MpComplex zz(prec), w(prec), ez(prec), x(prec), tmp(prec), sum(prec), coef(prec);
  MpComplex gamma_group(prec), power_group(prec), one(prec);
  zz.set(z);
  w.set(zz);
  w.neg();
  sc.exp(ez, zz);
  one.set(Complex{1.0, 0.0});
  MpSplit out;
  double log2_gamma = detail::kNegInf, log2_power = detail::kNegInf;

  // Gamma(a) group: 3F1(a, -l, l+1; 1; -1/z) plus the M(1-a, 1-a-n, w) parts.
  x.set(one);
  sc.div(x, w);  // -1/z
  {
    const std::array<Complex, 3> num{a, Complex(-l), Complex(l + 1)};
    const std::array<Complex, 1> den{Complex{1.0, 0.0}};
    const auto info = detail::hypergeometric_series_mp(num, den, x, rel_tol, max_terms, sum);
    if (!info.converged) throw NumericalError("kappa_split", "3F1 did not terminate");
    gamma_group.set(sum);
    log2_gamma = info.log2_max_term;
    out.terms += info.terms;
  }
  MpComplex inv_z(prec);
  inv_z.set(one);
  sc.div(inv_z, zz);
  coef.set(ez);  // e^z C_n (-1)^n (a)_n / n! z^{-n}, sign (-1)^{l+1} applied below
  if ((l + 1) % 2 != 0) coef.neg();
  MpComplex an(prec), oma(prec), bn(prec);
  oma.set(a);
  oma.neg();
  oma.add_ui(1);
  for (int n = 0; n <= l; ++n) {
    bn.set(oma);
    bn.add_si(-n);
    const std::array<const MpComplex*, 1> num{&oma};
    const std::array<const MpComplex*, 1> den{&bn};
    const auto info = detail::hypergeometric_series_mp(num, den, w, rel_tol, max_terms, sum);
    if (!info.converged) throw NumericalError("kappa_split", "1F1 did not converge");
    out.terms += info.terms;
    sc.mul(sum, coef);
    gamma_group.add(sum);
    log2_gamma = std::max(log2_gamma, coef.log2_abs() + info.log2_max_term);
    if (n == l) break;
    coef.mul_ui(static_cast<unsigned long>(l + n + 1) * static_cast<unsigned long>(l - n));
    coef.div_ui(static_cast<unsigned long>(n + 1) * static_cast<unsigned long>(n + 1));
    coef.neg();
    an.set(a);
    an.add_ui(static_cast<unsigned long>(n));
    sc.mul(coef, an);
    sc.mul(coef, inv_z);
  }

  // (-z)^a group: C_n / (-a-n)_{n+1} M(n+1, 1+a+n, w).
  MpComplex cn(prec), poch(prec), f(prec);
  cn.set(Complex{1.0, 0.0});
  for (int n = 0; n <= l; ++n) {
    poch.set(one);
    for (int j = 0; j <= n; ++j) {
      f.set(a);
      f.add_ui(static_cast<unsigned long>(j));
      f.neg();
      sc.mul(poch, f);
    }
    f.set(a);
    f.add_ui(static_cast<unsigned long>(n + 1));
    bn.set(Complex(n + 1));
    const std::array<const MpComplex*, 1> num{&bn};
    const std::array<const MpComplex*, 1> den{&f};
    const auto info = detail::hypergeometric_series_mp(num, den, w, rel_tol, max_terms, sum);
    if (!info.converged) throw NumericalError("kappa_split", "1F1 did not converge");
    out.terms += info.terms;
    tmp.set(cn);
    sc.div(tmp, poch);
    sc.mul(sum, tmp);
    if (n == 0)
      power_group.set(sum);
    else
      power_group.add(sum);
    log2_power = std::max(log2_power, tmp.log2_abs() + info.log2_max_term);
    if (n < l) {
      cn.mul_ui(static_cast<unsigned long>(l + n + 1) * static_cast<unsigned long>(l - n));
      cn.div_ui(static_cast<unsigned long>(n + 1));
    }
  }
  sc.mul(power_group, ez);
  if ((l + 1) % 2 != 0) power_group.neg();
  log2_power += ez.log2_abs();

  MpComplex g(prec), p(prec);
  gamma_mp(g, a, sc);
  pow_mp(p, w, a, sc);
  out.log2_scale = std::max(g.log2_abs() + log2_gamma, p.log2_abs() + log2_power);
  sc.mul(gamma_group, g);
  sc.mul(power_group, p);
  gamma_group.add(power_group);
  out.value = gamma_group.value();
  return out;
}

}  // namespace

void F22Args::validate(bool need_nonzero_z) const {
  require(l >= 0, "F22Args: l must be non-negative");
  require(is_finite(a) && is_finite(z), "F22Args: non-finite a or z");
  require(!near_integer(a), "F22Args: a must stay at least 1e-8 away from the integers");
  if (need_nonzero_z) require(z != Complex{}, "F22Args: z must be non-zero for this representation");
}

void F22Args::validate_asymptotic() const {
  validate(true);
  require(a.real() > 0.0 && a.real() < double(l) + 2.0,
          "F22Args: the large-|z| expansion needs 0 < Re(a) < l + 2");
}

EvalResult f22_series(const F22Args& args, const SeriesControl& ctl) {
  args.validate(false);
  const std::array<Complex, 2> num{args.a, args.a};
  const std::array<Complex, 2> den{args.a + double(args.l + 1), args.a - double(args.l)};
  return detail::hypergeometric_series(num, den, args.z, ctl, "f22_series");
}

EvalResult kummer_sum(Complex a, int l, Complex z, const SeriesControl& ctl) {
  require(l >= 0, "kummer_sum: l must be non-negative");
  std::vector<Complex> terms;
  double err = 0.0;
  int used = 0;
  Complex lp{1.0, 0.0};  // (l+1)_k
  for (int k = 0; k <= l; ++k) {
    const EvalResult m = sf::kummer_m(a, a + double(k + 1), z, ctl);
    const Complex c = sign_pow(k) * sf::binomial(l, k) * lp / sf::pochhammer(a, k + 1);
    terms.push_back(c * m.value);
    err += std::abs(c) * m.err_estimate;
    used += m.terms_used;
    lp *= double(l + 1 + k);
  }
  const double scale = abs_sum(terms);
  EvalResult r;
  r.value = checked(sum_ascending(std::move(terms)), "kummer_sum");
  r.method = Method::FormA;
  r.terms_used = used;
  r.err_estimate = err + 4.0 * kEps * scale;
  if (r.err_estimate <= kDoubleAcceptance * std::abs(r.value)) return r;

  using detail::MpComplex;
  auto prec = static_cast<mpfr_prec_t>(128.0 + std::log2(scale / std::abs(r.value) + 1.0) +
                                        2.0 * std::abs(z) * std::numbers::log2e);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double rel_tol = std::max(std::exp2(-static_cast<double>(prec) + 8.0), 1e-300);
    detail::MpScratch sc(prec);
    MpComplex zz(prec), c(prec), f(prec), m(prec), total(prec), ap(prec), bp(prec);
    zz.set(z);
    ap.set(a);
    c.set(Complex{1.0, 0.0});
    f.set(a);
    sc.div(c, f);  // 1 / (a)_1
    double log2_scale = detail::kNegInf;
    int terms_mp = 0;
    for (int k = 0; k <= l; ++k) {
      bp.set(ap);
      bp.add_ui(static_cast<unsigned long>(k + 1));
      const std::array<const MpComplex*, 1> num{&ap};
      const std::array<const MpComplex*, 1> den{&bp};
      const auto info = detail::hypergeometric_series_mp(num, den, zz, rel_tol, 100000, m);
      if (!info.converged) throw NumericalError("kummer_sum", "1F1 did not converge");
      terms_mp += info.terms;
      log2_scale = std::max(log2_scale, c.log2_abs() + info.log2_max_term);
      sc.mul(m, c);
      total.add(m);
      if (k == l) break;
      c.mul_ui(static_cast<unsigned long>(l - k) * static_cast<unsigned long>(l + 1 + k));
      c.div_ui(static_cast<unsigned long>(k + 1));
      c.neg();
      sc.div(c, bp);
    }
    const double log2_v = total.log2_abs();
    const double log2_terms = std::log2(double(terms_mp) + 1.0);
    const double needed = log2_scale - log2_v + 64.0 + log2_terms;
    if (std::isfinite(log2_v) && needed <= static_cast<double>(prec)) {
      r.value = checked(total.value(), "kummer_sum");
      r.terms_used = terms_mp;
      r.err_estimate = kEps * std::abs(r.value) +
                       std::exp2(log2_scale + log2_terms - static_cast<double>(prec));
      return r;
    }
    prec = static_cast<mpfr_prec_t>(std::isfinite(needed) ? needed + 64.0 : 2.0 * prec);
  }
  r.cancellation_warning = true;
  return r;
}

EvalResult f22_form_a(const F22Args& args, const SeriesControl& ctl) {
  args.validate(false);
  const EvalResult sum = kummer_sum(args.a, args.l, args.z, ctl);
  const Complex pre = sign_pow(args.l) * leading_ratio(args.a, args.l);
  EvalResult r;
  r.value = checked(pre * sum.value, "f22_form_a");
  r.method = Method::FormA;
  r.terms_used = sum.terms_used;
  r.err_estimate = std::abs(pre) * sum.err_estimate + 4.0 * kEps * std::abs(r.value);
  r.cancellation_warning = sum.cancellation_warning;
  return r;
}

EvalResult inc_gamma_sum(Complex a, int l, Complex z, const SeriesControl& ctl) {
  require(l >= 0, "inc_gamma_sum: l must be non-negative");
  require(z != Complex{}, "inc_gamma_sum: z must be non-zero");
  const Complex mz = -z;
  std::vector<Complex> terms;
  Complex zk{1.0, 0.0};  // z^{-k}
  Complex lp{1.0, 0.0};  // (l+1)_k / k!
  for (int k = 0; k <= l; ++k) {
    const Complex g = sf::lower_inc_gamma(a + double(k), mz, ctl);
    terms.push_back(sf::binomial(l, k) * lp * g * zk);
    lp *= double(l + 1 + k) / double(k + 1);
    zk /= z;
  }
  const double scale = abs_sum(terms);
  EvalResult r;
  r.value = checked(sum_ascending(std::move(terms)), "inc_gamma_sum");
  r.method = Method::FormB;
  r.terms_used = l + 1;
  r.err_estimate = 16.0 * kEps * scale;
  if (r.err_estimate <= kDoubleAcceptance * std::abs(r.value)) return r;

  // gamma(a+k, -z) z^{-k} = (-z)^a (-1)^k M(a+k; a+k+1; z) / (a+k)
  using detail::MpComplex;
  const Complex mz_pow = sf::cpow(mz, a);
  auto prec = static_cast<mpfr_prec_t>(128.0 + std::log2(scale / std::abs(r.value) + 1.0) +
                                        2.0 * std::abs(z) * std::numbers::log2e);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double rel_tol = std::max(std::exp2(-static_cast<double>(prec) + 8.0), 1e-300);
    detail::MpScratch sc(prec);
    MpComplex zz(prec), c(prec), m(prec), total(prec), ap(prec), bp(prec);
    zz.set(z);
    c.set(Complex{1.0, 0.0});  // (-1)^k C(l,k) (l+1)_k / k!
    double log2_scale = detail::kNegInf;
    int terms_mp = 0;
    for (int k = 0; k <= l; ++k) {
      ap.set(a);
      ap.add_ui(static_cast<unsigned long>(k));
      bp.set(ap);
      bp.add_ui(1);
      const std::array<const MpComplex*, 1> num{&ap};
      const std::array<const MpComplex*, 1> den{&bp};
      const auto info = detail::hypergeometric_series_mp(num, den, zz, rel_tol, 100000, m);
      if (!info.converged) throw NumericalError("inc_gamma_sum", "1F1 did not converge");
      terms_mp += info.terms;
      sc.div(m, ap);
      log2_scale = std::max(log2_scale, c.log2_abs() + info.log2_max_term - std::log2(std::abs(a + double(k))));
      sc.mul(m, c);
      total.add(m);
      if (k == l) break;
      c.mul_ui(static_cast<unsigned long>(l - k) * static_cast<unsigned long>(l + 1 + k));
      c.div_ui(static_cast<unsigned long>(k + 1) * static_cast<unsigned long>(k + 1));
      c.neg();
    }
    const double log2_v = total.log2_abs();
    const double log2_terms = std::log2(double(terms_mp) + 1.0);
    const double needed = log2_scale - log2_v + 64.0 + log2_terms;
    if (std::isfinite(log2_v) && needed <= static_cast<double>(prec)) {
      r.value = checked(mz_pow * total.value(), "inc_gamma_sum");
      r.terms_used = terms_mp;
      r.err_estimate = 4.0 * kEps * std::abs(r.value) +
                       std::abs(mz_pow) * std::exp2(log2_scale + log2_terms - static_cast<double>(prec));
      return r;
    }
    prec = static_cast<mpfr_prec_t>(std::isfinite(needed) ? needed + 64.0 : 2.0 * prec);
  }
  r.cancellation_warning = true;
  return r;
}

EvalResult f22_form_b(const F22Args& args, const SeriesControl& ctl) {
  args.validate(true);
  const EvalResult sum = inc_gamma_sum(args.a, args.l, args.z, ctl);
  const Complex pre = sf::cpow(-args.z, -args.a) * leading_ratio(args.a, args.l);
  EvalResult r = sum;
  r.value = checked(pre * sum.value, "f22_form_b");
  r.err_estimate = std::abs(pre) * sum.err_estimate + 4.0 * kEps * std::abs(r.value);
  return r;
}

Complex kappa_plus(Complex a, int l, Complex z) {
  require(l >= 0, "kappa_plus: l must be non-negative");
  require(z != Complex{}, "kappa_plus: z must be non-zero");
  return checked(sf::gamma_complex(a) * sf::terminating_3f1(a, l, -1.0 / z), "kappa_plus");
}

EvalResult kappa_minus_eval(Complex a, int l, Complex z, double rel_tol) {
  require(l >= 0, "kappa_minus: l must be non-negative");
  require(z != Complex{}, "kappa_minus: z must be non-zero");
  // Weights (l+n)!/(n!(l-n)!) |z|^{-n}; later terms need proportionally less accuracy.
  std::vector<double> w(l + 1);
  double coef = 1.0;
  for (int n = 0; n <= l; ++n) {
    w[n] = coef * std::pow(std::abs(z), -n);
    coef *= double(l + n + 1) * double(l - n) / double(n + 1);
  }
  const double w_max = *std::max_element(w.begin(), w.end());
  std::vector<Complex> terms;
  double err = 0.0;
  int used = 0;
  Complex zn{1.0, 0.0};
  coef = 1.0;
  for (int n = 0; n <= l; ++n) {
    sf::KummerUOptions opt;
    opt.rel_tol = std::min(1e-6, rel_tol * std::max(1.0, w_max / w[n]));
    const EvalResult u = sf::kummer_u_eval(1.0 - a, 1.0 - a - double(n), -z, opt);
    const Complex c = coef * sign_pow(n) * zn;
    terms.push_back(c * u.value);
    err += std::abs(c) * u.err_estimate;
    used += u.terms_used;
    coef *= double(l + n + 1) * double(l - n) / double(n + 1);
    zn /= z;
  }
  const double scale = abs_sum(terms);
  EvalResult r;
  r.value = checked(sign_pow(l + 1) * sum_ascending(std::move(terms)), "kappa_minus");
  r.method = Method::FormC;
  r.terms_used = used;
  r.err_estimate = err + 4.0 * kEps * scale;
  return r;
}

Complex kappa_minus(Complex a, int l, Complex z) { return kappa_minus_eval(a, l, z).value; }

EvalResult kappa_combination(Complex a, int l, Complex z) {
  require(l >= 0, "kappa_combination: l must be non-negative");
  require(z != Complex{}, "kappa_combination: z must be non-zero");
  EvalResult r;
  r.method = Method::FormC;
  Complex v_double{};
  bool have_double = false;
  try {
    const Complex kp = kappa_plus(a, l, z);
    const EvalResult km = kappa_minus_eval(a, l, z);
    const Complex ez = std::exp(z);
    v_double = kp + ez * km.value;
    have_double = true;
    const double err =
        std::abs(ez) * km.err_estimate + 8.0 * kEps * (std::abs(kp) + std::abs(ez * km.value));
    if (err <= kDoubleAcceptance * std::abs(v_double)) {
      r.value = checked(v_double, "kappa_combination");
      r.terms_used = km.terms_used + l + 1;
      r.err_estimate = err;
      return r;
    }
  } catch (const NumericalError&) {
  }

  auto prec = static_cast<mpfr_prec_t>(160.0 + 2.0 * std::abs(z) * std::numbers::log2e);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const MpSplit sp = kappa_split_mp(a, l, z, prec);
    const double log2_v = std::log2(std::abs(sp.value));
    const double log2_terms = std::log2(double(sp.terms) + 1.0);
    const double needed = sp.log2_scale - log2_v + 64.0 + log2_terms;
    if (std::isfinite(log2_v) && needed <= static_cast<double>(prec)) {
      r.value = checked(sp.value, "kappa_combination");
      r.terms_used = sp.terms;
      r.err_estimate = 4.0 * kEps * std::abs(sp.value) +
                       std::exp2(sp.log2_scale + log2_terms - static_cast<double>(prec));
      return r;
    }
    prec = static_cast<mpfr_prec_t>(std::isfinite(needed) ? needed + 64.0 : 2.0 * prec);
  }
  if (!have_double) throw NumericalError("kappa_combination", "extended precision did not converge");
  r.value = checked(v_double, "kappa_combination");
  r.err_estimate = std::abs(v_double);
  r.cancellation_warning = true;
  return r;
}

EvalResult f22_form_c(const F22Args& args) {
  args.validate(true);
  const Complex a = args.a;
  const int l = args.l;
  const EvalResult inner = kappa_combination(a, l, args.z);
  const Complex pre = leading_ratio(a, l) * sf::cpow(-args.z, -a);
  EvalResult r;
  r.value = checked(pre * inner.value, "f22_form_c");
  r.method = Method::FormC;
  r.terms_used = inner.terms_used;
  r.err_estimate = std::abs(pre) * inner.err_estimate + 4.0 * kEps * std::abs(r.value);
  r.cancellation_warning = inner.cancellation_warning;
  return r;
}

AsymCoeffs d_coeffs_recursive(Complex a, int l, int N) {
  require(l >= 0 && N >= 0, "d_coeffs_recursive: l and N must be non-negative");
  AsymCoeffs c{a, l, {}};
  c.d.reserve(N + 1);
  c.d.push_back({1.0, 0.0});
  if (N == 0) return c;
  // Extended precision: the recursion loses about one digit per four steps in double.
  using Wide = std::complex<long double>;
  const Wide aw(a.real(), a.imag());
  const long double ll = static_cast<long double>(l) * l + l;
  Wide prev{1.0L, 0.0L};
  Wide cur = (1.0L - ll - aw) / 2.0L;
  c.d.push_back(Complex(cur));
  for (int n = 1; n < N; ++n) {
    const long double dn = n;
    const Wide b = 2.0L * (2.0L * dn * dn - dn * (2.0L * aw - 3.0L) - ll - aw + 1.0L);
    const Wide g = dn * (dn - static_cast<long double>(l) - aw) * (dn + static_cast<long double>(l) + 1.0L - aw);
    const Wide next = (b * cur - g * prev) / (4.0L * (dn + 1.0L));
    prev = cur;
    cur = next;
    c.d.push_back(Complex(cur));
  }
  return c;
}

Complex d_coeff_closed(Complex a, int l, int n) {
  require(l >= 0 && n >= 0, "d_coeff_closed: l and n must be non-negative");
  const Complex den = sf::pochhammer(a - double(n), l);
  if (std::abs(den) < kIntegerGuard * std::abs(sf::pochhammer(a, l)))
    throw DomainError("d_coeff_closed: (a-n)_l vanishes; a is too close to an integer");
  return sf::pochhammer(1.0 - a, n) * sf::pochhammer(a, l) / (std::ldexp(1.0, n) * den) *
         sf::terminating_3f2_unit(l, n, a);
}

AsymptoticParts f22_asymptotic_parts(const F22Args& args, std::optional<int> N,
                                     const AsymptoticOptions& opt) {
  args.validate_asymptotic();
  if (N && *N < 0) throw DomainError("f22_asymptotic: N must be non-negative");
  if (std::abs(args.z) < opt.min_abs_z)
    throw DomainError("f22_asymptotic: |z| below the configured minimum for the expansion");
  const Complex a = args.a;
  const int l = args.l;
  const Complex z = args.z;
  const Complex ratio = leading_ratio(a, l);
  const Complex al = sf::pochhammer(a, l);

  // term_n = (1-a)_n (a)_l / (a-n)_l 3F2(...) z^{-n}, built without forming (1-a)_n alone.
  Complex p{1.0, 0.0};
  int p_at = 0;
  auto term = [&](int n) {
    for (; p_at < n; ++p_at) p *= (1.0 - a + double(p_at)) / z;
    return p * al / sf::pochhammer(a - double(n), l) * sf::terminating_3f2_unit(l, n, a);
  };
  const auto ts = detail::optimal_truncation(term, opt.scan_terms, N, "f22_asymptotic");

  const Complex first = ratio * sf::cpow(-z, -a) * kappa_plus(a, l, z);
  const Complex second_pre = sign_pow(l) * ratio * std::exp(z) / z;
  AsymptoticParts out;
  out.first = checked(first, "f22_asymptotic");
  out.second = checked(second_pre * ts.sum, "f22_asymptotic");
  out.result.value = out.first + out.second;
  out.result.method = Method::Asymptotic;
  out.result.terms_used = ts.terms;
  out.result.err_estimate =
      std::abs(second_pre) * (ts.first_omitted + 4.0 * kEps * ts.abs_sum) +
      8.0 * kEps * std::abs(out.first);
  return out;
}

EvalResult f22_asymptotic(const F22Args& args, std::optional<int> N, const AsymptoticOptions& opt) {
  return f22_asymptotic_parts(args, N, opt).result;
}

double prop1_residual(Complex a, int l, Complex z) {
  require(l >= 0, "prop1_residual: l must be non-negative");
  require(z != Complex{}, "prop1_residual: z must be non-zero");
  if (near_integer(a) && std::round(a.real()) <= double(l))
    throw DomainError("prop1_residual: a must avoid the integers <= l");
  // Both sides in long double so the residual measures the identity, not the rounding.
  using Wide = std::complex<long double>;
  const Wide aw(a.real(), a.imag());
  const Wide zw(z.real(), z.imag());
  Wide lhs_w{};
  Wide c{1.0L, 0.0L};  // (-1)^k C(l,k) (l+1)_k (1-a)_k z^{-k} / k!
  for (int k = 0; k <= l; ++k) {
    Wide t{1.0L, 0.0L}, poly{1.0L, 0.0L};  // 1F1(-k; a-k; z)
    for (int j = 0; j < k; ++j) {
      t *= static_cast<long double>(j - k) / ((aw - static_cast<long double>(k - j)) * static_cast<long double>(j + 1)) * zw;
      poly += t;
    }
    lhs_w += c * poly;
    c *= -static_cast<long double>(l - k) / (k + 1) * static_cast<long double>(l + 1 + k) *
         (1.0L - aw + static_cast<long double>(k)) / static_cast<long double>(k + 1) / zw;
  }
  Wide t{1.0L, 0.0L}, rhs_w{1.0L, 0.0L};  // 3F1(1-a, -l, l+1; 1; -1/z)
  for (int n = 0; n < l; ++n) {
    t *= (1.0L - aw + static_cast<long double>(n)) * static_cast<long double>(n - l) *
         static_cast<long double>(l + 1 + n) / (static_cast<long double>(n + 1) * (n + 1)) * (-1.0L / zw);
    rhs_w += t;
  }
  const Complex lhs(lhs_w);
  const Complex rhs = sign_pow(l) * Complex(rhs_w);
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

std::pair<Complex, Complex> chargeless_limit(int l, Complex z, double eps) {
  require(l >= 0, "chargeless_limit: l must be non-negative");
  require(z != Complex{}, "chargeless_limit: z must be non-zero");
  require(eps > 0.0 && eps <= 1e-4, "chargeless_limit: eps must lie in (0, 1e-4]");
  const Complex a = 1.0 + eps * Complex{1.0, 1.0} / std::sqrt(2.0);
  const Complex numeric = sf::pochhammer(1.0 - a, l) * f22_form_c({a, l, z}).value;
  double fact = 1.0;
  for (int j = 2; j <= l + 1; ++j) fact *= j;
  const Complex analytic =
      ipow(l) * fact * std::exp(z / 2.0) * sf::spherical_bessel_j(l, Complex{0.0, 1.0} * z / 2.0);
  return {numeric, analytic};
}

EvalResult f22_auto(const F22Args& args, const RoutingThresholds& thr, const SeriesControl& ctl) {
  args.validate(false);
  const double az = std::abs(args.z);
  if (az == 0.0) return f22_series(args, ctl);
  if (az <= thr.form_a_max_abs_z && args.l <= thr.form_a_max_l) return f22_form_a(args, ctl);
  const bool large_l = double(args.l) > thr.series_l_ratio * az;
  if (az <= thr.series_max_abs_z || (large_l && az <= thr.series_hard_max_abs_z))
    return f22_series(args, ctl);
  const bool strip = args.a.real() > 0.0 && args.a.real() < double(args.l) + 2.0;
  if (az <= thr.form_c_max_abs_z || !strip) return f22_form_c(args);
  return f22_asymptotic(args);
}

}  // namespace cdpw::f22

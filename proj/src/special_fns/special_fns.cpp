#include "cdpw/special_fns.hpp"

#include <algorithm>
#include <array>

#include "../detail/truncation.hpp"
#include "hypergeometric_series.hpp"

namespace cdpw {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Series: return "series";
    case Method::FormA: return "form_a";
    case Method::FormB: return "form_b";
    case Method::FormC: return "form_c";
    case Method::Asymptotic: return "asymptotic";
  }
  return "?";
}

Complex sum_ascending(std::vector<Complex> terms) {
  std::sort(terms.begin(), terms.end(),
            [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  CompensatedSum s;
  for (Complex t : terms) s.add(t);
  return s.value();
}

double abs_sum(std::span<const Complex> terms) noexcept {
  double s = 0.0;
  for (Complex t : terms) s += std::abs(t);
  return s;
}

}  // namespace cdpw

namespace cdpw::sf {
namespace {

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,     1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0};

// B_{2k} / (2k), k = 1..8
constexpr std::array<double, 8> kDigammaAsym = {
    1.0 / 12.0,     -1.0 / 120.0,      1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0,    -691.0 / 32760.0,  1.0 / 12.0,   -3617.0 / 8160.0};

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kShift = 15.0;

void require_finite(Complex z, const char* where) {
  if (!is_finite(z)) throw DomainError(std::string(where) + ": non-finite argument");
}

// sin(pi z) and cos(pi z) with the integer part removed exactly first.
Complex sin_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex f{z.real() - n, z.imag()};
  const Complex s = std::sin(kPi * f);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

Complex cos_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex f{z.real() - n, z.imag()};
  const Complex c = std::cos(kPi * f);
  return std::fmod(n, 2.0) == 0.0 ? c : -c;
}

// log Gamma(w) for |w| >= kShift, Re w > 0.
Complex stirling_log_gamma(Complex w) {
  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex corr = 0.0;
  Complex p = inv;
  for (double c : kStirling) {
    corr += c * p;
    p *= inv2;
  }
  return (w - 0.5) * std::log(w) - w + kHalfLog2Pi + corr;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(r);
}

Complex pochhammer(Complex a, int n) {
  if (n < 0) throw DomainError("pochhammer: n must be non-negative");
  Complex p{1.0, 0.0};
  for (int j = 0; j < n; ++j) p *= a + static_cast<double>(j);
  return p;
}

Complex gamma_complex(Complex z) {
  require_finite(z, "gamma_complex");
  if (is_nonpositive_integer(z)) throw DomainError("gamma_complex: pole at a non-positive integer");
  if (z.real() < 0.5) return checked(kPi / (sin_pi(z) * gamma_complex(1.0 - z)), "gamma_complex");
  if (z.imag() == 0.0 && z.real() <= 30.0 && z.real() == std::round(z.real()))
    return std::tgamma(z.real());
  Complex w = z;
  Complex prod{1.0, 0.0};
  while (std::abs(w) < kShift) {
    prod *= w;
    w += 1.0;
  }
  return checked(std::exp(stirling_log_gamma(w)) / prod, "gamma_complex");
}

Complex reciprocal_gamma(Complex z) {
  if (is_nonpositive_integer(z)) return {0.0, 0.0};
  return 1.0 / gamma_complex(z);
}

Complex digamma(Complex z) {
  require_finite(z, "digamma");
  if (is_nonpositive_integer(z)) throw DomainError("digamma: pole at a non-positive integer");
  if (z.real() < 0.5) return digamma(1.0 - z) - kPi * cos_pi(z) / sin_pi(z);
  Complex w = z;
  Complex shift = 0.0;
  while (std::abs(w) < kShift) {
    shift += 1.0 / w;
    w += 1.0;
  }
  const Complex inv2 = 1.0 / (w * w);
  Complex corr = 0.0;
  Complex p = inv2;
  for (double c : kDigammaAsym) {
    corr += c * p;
    p *= inv2;
  }
  return std::log(w) - 0.5 / w - corr - shift;
}

EvalResult kummer_m(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  require_finite(a, "kummer_m");
  require_finite(b, "kummer_m");
  if (near_nonpositive_integer(b) && !(is_nonpositive_integer(a) && a.real() > b.real()))
    throw DomainError("kummer_m: pole in b (non-positive integer)");
  const std::array<Complex, 1> num{a};
  const std::array<Complex, 1> den{b};
  return detail::hypergeometric_series(num, den, z, ctl, "kummer_m");
}

Complex lower_inc_gamma(Complex a, Complex z, const SeriesControl& ctl) {
  if (near_nonpositive_integer(a))
    throw DomainError("lower_inc_gamma: a at a non-positive integer");
  if (z == Complex{}) {
    if (a.real() > 0.0) return {0.0, 0.0};
    throw DomainError("lower_inc_gamma: branch point at z = 0 with Re(a) <= 0");
  }
  const Complex m = kummer_m(a, a + 1.0, -z, ctl).value;
  return checked(cpow(z, a) * m / a, "lower_inc_gamma");
}

// ---------------------------------------------------------------------------
// Tricomi U

namespace {

// z^{-a} sum_s (a)_s (a-b+1)_s / s! (-z)^{-s}; exact when a is a non-positive integer.
EvalResult u_large_z(Complex a, Complex b, Complex z) {
  const Complex c = a - b + 1.0;
  const Complex w = -1.0 / z;
  Complex t{1.0, 0.0};
  int last = -1;
  auto term = [&](int s) {
    for (; last < s; ++last) {
      if (last >= 0) t *= (a + double(last)) * (c + double(last)) / double(last + 1) * w;
    }
    return t;
  };
  const int n_max = static_cast<int>(2.0 * std::abs(z) + std::abs(a) + std::abs(c)) + 20;
  const auto ts = detail::optimal_truncation(term, std::min(n_max, 4000), std::nullopt,
                                             "kummer_u");
  const Complex pre = cpow(z, -a);
  EvalResult r;
  r.value = pre * ts.sum;
  r.method = Method::Asymptotic;
  r.terms_used = ts.terms;
  r.err_estimate = std::abs(pre) * (ts.first_omitted + 4.0 * kEps * ts.abs_sum);
  return r;
}

// Two-term connection formula through M; b must be non-integer.
EvalResult u_connection(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const EvalResult m1 = kummer_m(a, b, z, ctl);
  const EvalResult m2 = kummer_m(a - b + 1.0, 2.0 - b, z, ctl);
  const Complex c1 = gamma_complex(1.0 - b) * reciprocal_gamma(a - b + 1.0);
  const Complex c2 = gamma_complex(b - 1.0) * reciprocal_gamma(a) * cpow(z, 1.0 - b);
  const Complex t1 = c1 * m1.value;
  const Complex t2 = c2 * m2.value;
  EvalResult r;
  r.value = t1 + t2;
  r.method = Method::Series;
  r.terms_used = m1.terms_used + m2.terms_used;
  r.err_estimate = 32.0 * kEps * (std::abs(t1) + std::abs(t2)) + std::abs(c1) * m1.err_estimate +
                   std::abs(c2) * m2.err_estimate;
  return r;
}

// b = n + 1 with n >= 0: logarithmic limit form of the connection formula.
EvalResult u_integer_b(Complex a, int n, Complex z, const SeriesControl& ctl) {
  CompensatedSum tail;
  double tail_abs = 0.0;
  const Complex ra = reciprocal_gamma(a);
  if (n > 0 && ra != Complex{}) {
    for (int k = 1; k <= n; ++k) {
      const Complex t = std::tgamma(double(k)) * pochhammer(1.0 - a + double(k), n - k) /
                        std::tgamma(double(n - k + 1)) * std::pow(z, -k) * ra;
      tail.add(t);
      tail_abs += std::abs(t);
    }
  }
  const Complex lead = sign_pow(n + 1) / std::tgamma(double(n + 1)) * reciprocal_gamma(a - double(n));
  CompensatedSum series;
  double series_abs = 0.0;
  int k = 0;
  if (lead != Complex{}) {
    const Complex logz = std::log(z);
    Complex psi_a = digamma(a);
    double psi_1 = -0.57721566490153286061;  // psi(1 + k)
    double psi_n = psi_1;                    // psi(n + 1 + k)
    for (int j = 1; j <= n; ++j) psi_n += 1.0 / j;
    Complex c{1.0, 0.0};  // (a)_k / ((n+1)_k k!) z^k
    int small_run = 0;
    for (; k < ctl.max_terms; ++k) {
      const Complex t = c * (logz + psi_a - psi_1 - psi_n);
      series.add(t);
      series_abs += std::abs(t) * double(k + 1);
      if (std::abs(t) <= ctl.rel_tol * std::abs(series.value()) && std::abs(c) < 1.0) {
        if (++small_run >= 3) break;
      } else {
        small_run = 0;
      }
      c *= (a + double(k)) / (double(n + 1 + k) * double(k + 1)) * z;
      psi_a += 1.0 / (a + double(k));
      psi_1 += 1.0 / double(k + 1);
      psi_n += 1.0 / double(n + 1 + k);
    }
    if (k >= ctl.max_terms) throw NumericalError("kummer_u", "integer-b series did not converge");
  }
  EvalResult r;
  r.value = lead * series.value() + tail.value();
  r.method = Method::Series;
  r.terms_used = k + n;
  r.err_estimate = 8.0 * kEps * (std::abs(lead) * series_abs + tail_abs);
  return r;
}

bool is_integer(Complex z) { return z.imag() == 0.0 && z.real() == std::round(z.real()); }

EvalResult u_moderate(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  if (is_integer(b)) {
    const int bi = static_cast<int>(b.real());
    if (bi >= 1) return u_integer_b(a, bi - 1, z, ctl);
    // U(a, b, z) = z^{1-b} U(a-b+1, 2-b, z) moves b to 2 - b >= 2.
    EvalResult r = u_integer_b(a - b + 1.0, 1 - bi, z, ctl);
    const Complex f = cpow(z, 1.0 - b);
    r.value *= f;
    r.err_estimate *= std::abs(f);
    return r;
  }
  return u_connection(a, b, z, ctl);
}

double relative(const EvalResult& r) {
  const double m = std::abs(r.value);
  return m > 0.0 ? r.err_estimate / m : r.err_estimate;
}

}  // namespace

EvalResult kummer_u_eval(Complex a, Complex b, Complex z, const KummerUOptions& opt) {
  require_finite(a, "kummer_u");
  require_finite(b, "kummer_u");
  require_finite(z, "kummer_u");
  if (z == Complex{}) throw DomainError("kummer_u: z = 0 is a branch point");

  // Terminating parameter sets: a or a-b+1 a non-positive integer.
  if (is_nonpositive_integer(a)) return u_large_z(a, b, z);
  if (is_nonpositive_integer(a - b + 1.0)) {
    EvalResult r = u_large_z(a - b + 1.0, 2.0 - b, z);
    const Complex f = cpow(z, 1.0 - b);
    r.value *= f;
    r.err_estimate *= std::abs(f);
    return r;
  }

  const bool b_near_pole = near_integer(b) && !is_integer(b);
  EvalResult best;
  if (std::abs(z) > opt.asymptotic_threshold) {
    best = u_large_z(a, b, z);
    if (relative(best) > opt.rel_tol && !b_near_pole) {
      const EvalResult alt = u_moderate(a, b, z, opt.series);
      if (relative(alt) < relative(best)) best = alt;
    }
  } else {
    if (b_near_pole) {
      best = u_large_z(a, b, z);
      if (relative(best) > opt.rel_tol)
        throw DomainError(
            "kummer_u: b within 1e-8 of an integer puts the connection coefficients at a pole");
    } else {
      best = u_moderate(a, b, z, opt.series);
      if (relative(best) > opt.rel_tol) {
        const EvalResult alt = u_large_z(a, b, z);
        if (relative(alt) < relative(best)) best = alt;
      }
    }
  }
  if (relative(best) > 1e3 * opt.rel_tol)
    throw NumericalError("kummer_u", "requested accuracy unreachable (relative error estimate " +
                                         std::to_string(relative(best)) + ")");
  best.value = checked(best.value, "kummer_u");
  return best;
}

// ---------------------------------------------------------------------------

Complex spherical_bessel_j(int l, Complex z) {
  if (l < 0) throw DomainError("spherical_bessel_j: l must be non-negative");
  require_finite(z, "spherical_bessel_j");
  if (z == Complex{}) return l == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  const Complex j0 = std::abs(z) < 1e-4 ? 1.0 - z * z / 6.0 + z * z * z * z / 120.0
                                        : std::sin(z) / z;
  if (l == 0) return j0;
  const Complex j1 = std::abs(z) < 1e-4 ? z / 3.0 - z * z * z / 30.0
                                        : (std::sin(z) / z - std::cos(z)) / z;
  if (l == 1) return j1;

  if (std::abs(z) > static_cast<double>(l)) {
    Complex prev = j0, cur = j1;
    for (int k = 1; k < l; ++k) {
      const Complex next = double(2 * k + 1) / z * cur - prev;
      prev = cur;
      cur = next;
    }
    return checked(cur, "spherical_bessel_j");
  }

  // Miller: downward from well above l, normalised against j0 or j1.
  const int start = l + 20 + static_cast<int>(std::sqrt(40.0 * (l + 1))) +
                    static_cast<int>(std::abs(z));
  Complex above{0.0, 0.0}, cur{1e-30, 0.0}, at_l{0.0, 0.0};
  Complex f1{0.0, 0.0};
  for (int k = start; k >= 1; --k) {
    const Complex below = double(2 * k + 1) / z * cur - above;
    above = cur;
    cur = below;  // cur now holds f_{k-1}
    if (k - 1 == l) at_l = cur;
    if (k - 1 == 1) f1 = cur;
    if (std::abs(cur) > 1e200) {
      above *= 1e-200;
      cur *= 1e-200;
      at_l *= 1e-200;
      f1 *= 1e-200;
    }
  }
  const Complex f0 = cur;
  const Complex scale = std::abs(f0) >= std::abs(f1) ? j0 / f0 : j1 / f1;
  return checked(at_l * scale, "spherical_bessel_j");
}

Complex terminating_3f1(Complex a, int l, Complex x) {
  if (l < 0) throw DomainError("terminating_3f1: l must be non-negative");
  std::vector<Complex> terms;
  terms.reserve(l + 1);
  Complex t{1.0, 0.0};
  terms.push_back(t);
  for (int n = 0; n < l; ++n) {
    t *= (a + double(n)) * double(n - l) * double(l + 1 + n) / (double(n + 1) * double(n + 1)) * x;
    terms.push_back(t);
  }
  return sum_ascending(std::move(terms));
}

Complex terminating_3f2_unit(int l, int n, Complex a) {
  if (l < 0 || n < 0) throw DomainError("terminating_3f2_unit: l and n must be non-negative");
  const int top = std::min(l, n);
  std::vector<Complex> terms;
  terms.reserve(top + 1);
  Complex t{1.0, 0.0};
  terms.push_back(t);
  const Complex c = 1.0 - a - double(l);
  for (int m = 0; m < top; ++m) {
    const Complex d = c + double(m);
    if (std::abs(d) < kIntegerGuard)
      throw DomainError("terminating_3f2_unit: (1-a-l)_m vanishes; a is too close to an integer");
    t *= double(m - l) * double(m - l) * double(m - n) / (double(m + 1) * double(m + 1) * d);
    terms.push_back(t);
  }
  return sum_ascending(std::move(terms));
}

}  // namespace cdpw::sf

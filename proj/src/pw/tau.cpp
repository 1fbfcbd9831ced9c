#include <algorithm>
#include <cmath>

#include "../detail/truncation.hpp"
#include "cdpw/pw.hpp"
#include "tau_detail.hpp"

namespace cdpw::pw {
namespace {


TauResult from_eval(const EvalResult& r, TauMethod m) {
  return {r.value, m, r.terms_used, r.err_estimate, r.cancellation_warning};
}

// Runs `body` for the requested sign; the prior form goes through the
// conjugation symmetry unless independent evaluation is requested.
template <class Body>
TauResult with_sign(const TauRequest& req, const TauOptions& opt, Body&& body) {
  validate(req);
  if (req.sign == Sign::Post || opt.independent_prior) return body(detail::Signed(req));
  TauRequest post = req;
  post.sign = Sign::Post;
  TauResult r = body(detail::Signed(post));
  r.value = sign_pow(req.l) * std::conj(r.value);
  return r;
}

double snapped_gamma(double g) { return std::abs(g) < kIntegerGuard ? 0.0 : g; }

}  // namespace

namespace detail {

Signed::Signed(const TauRequest& req)
    : s(req.sign == Sign::Post ? 1.0 : -1.0),
      gamma(snapped_gamma(req.gamma)),
      l(req.l),
      kr(req.kr),
      a(1.0, s * gamma),
      z(0.0, -2.0 * s * req.kr),
      sigma_l(req.sign == Sign::Post ? 1.0 : sign_pow(req.l)) {}

Complex Signed::phase() const {
  // sigma^l (2kr)^{s i gamma} e^{s i kr}
  return sigma_l * std::polar(1.0, s * (gamma * std::log(2.0 * kr) + kr));
}

Complex Signed::scale() const {
  // phase() * (-z)^{-a} on the principal branch, without its e^{s i kr}.
  return sigma_l * std::exp(gamma * kPi / 2.0) / Complex{0.0, 2.0 * s * kr};
}

}  // namespace detail

using detail::Signed;

const char* to_string(Sign s) noexcept { return s == Sign::Post ? "post" : "prior"; }

const char* to_string(TauMethod m) noexcept {
  switch (m) {
    case TauMethod::Hyp2F2: return "hyp2f2";
    case TauMethod::IncGamma: return "inc_gamma";
    case TauMethod::Sum1F1: return "sum_1f1";
    case TauMethod::KappaSplit: return "kappa_split";
    case TauMethod::Asymptotic: return "asymptotic";
    case TauMethod::Quadrature: return "quadrature";
    case TauMethod::Auto: return "auto";
  }
  return "?";
}

Sign parse_sign(const std::string& s) {
  if (s == "post" || s == "+") return Sign::Post;
  if (s == "prior" || s == "-") return Sign::Prior;
  throw DomainError("unknown sign '" + s + "' (expected post or prior)");
}

TauMethod parse_method(const std::string& s) {
  for (TauMethod m : {TauMethod::Hyp2F2, TauMethod::IncGamma, TauMethod::Sum1F1,
                      TauMethod::KappaSplit, TauMethod::Asymptotic, TauMethod::Quadrature,
                      TauMethod::Auto})
    if (s == to_string(m)) return m;
  throw DomainError("unknown method '" + s +
                    "' (expected hyp2f2, inc_gamma, sum_1f1, kappa_split, asymptotic, "
                    "quadrature or auto)");
}

void validate(const TauRequest& req) {
  if (!(req.kr > 0.0) || !std::isfinite(req.kr))
    throw DomainError("tau: kr must be positive and finite (kr > 0)");
  if (!std::isfinite(req.gamma)) throw DomainError("tau: gamma must be finite");
  if (req.l < 0) throw DomainError("tau: l must be non-negative");
}

TauResult tau_hyp(const TauRequest& req, const TauOptions& opt) {
  return with_sign(req, opt, [&](const Signed& w) {
    if (w.gamma == 0.0) {
      const Complex v = ipow(w.l) * sf::spherical_bessel_j(w.l, w.kr);
      return TauResult{v, TauMethod::Hyp2F2, 1, 4.0 * kEps * std::abs(v), false};
    }
    Complex ratio = 1.0 / (w.a + double(w.l));  // (1-a)_l / (a)_{l+1} without overflow
    for (int j = 0; j < w.l; ++j) ratio *= (1.0 - w.a + double(j)) / (w.a + double(j));
    const Complex pre = w.phase() * ratio;
    const EvalResult f = f22::f22_auto({w.a, w.l, w.z}, opt.f22_routing, opt.series);
    TauResult r = from_eval(f, TauMethod::Hyp2F2);
    r.value = checked(pre * f.value, "tau_hyp");
    r.err_estimate = std::abs(pre) * f.err_estimate + 4.0 * kEps * std::abs(r.value);
    return r;
  });
}

TauResult tau_inc_gamma(const TauRequest& req, const TauOptions& opt) {
  return with_sign(req, opt, [&](const Signed& w) {
    const EvalResult sum = f22::inc_gamma_sum(w.a, w.l, w.z, opt.series);
    const Complex pre = w.scale() * std::polar(1.0, w.s * w.kr);
    TauResult r = from_eval(sum, TauMethod::IncGamma);
    r.value = checked(pre * sum.value, "tau_inc_gamma");
    r.err_estimate = std::abs(pre) * sum.err_estimate + 4.0 * kEps * std::abs(r.value);
    return r;
  });
}

TauResult tau_1f1_sum(const TauRequest& req, const TauOptions& opt) {
  return with_sign(req, opt, [&](const Signed& w) {
    const EvalResult sum = f22::kummer_sum(w.a, w.l, w.z, opt.series);
    const Complex pre = sign_pow(w.l) * w.phase();
    TauResult r = from_eval(sum, TauMethod::Sum1F1);
    r.value = checked(pre * sum.value, "tau_1f1_sum");
    r.err_estimate = std::abs(pre) * sum.err_estimate + 4.0 * kEps * std::abs(r.value);
    return r;
  });
}

TauResult tau_kappa(const TauRequest& req, const TauOptions& opt) {
  return with_sign(req, opt, [&](const Signed& w) {
    // e^{ikr} kappa_plus + e^{-ikr} kappa_minus = e^{ikr} (kappa_plus + e^z kappa_minus)
    const EvalResult k = f22::kappa_combination(w.a, w.l, w.z);
    const Complex pre = w.scale() * std::polar(1.0, w.s * w.kr);
    TauResult r;
    r.value = checked(pre * k.value, "tau_kappa");
    r.method = TauMethod::KappaSplit;
    r.terms_used = k.terms_used;
    r.err_estimate = std::abs(pre) * k.err_estimate + 4.0 * kEps * std::abs(r.value);
    r.cancellation_warning = k.cancellation_warning;
    return r;
  });
}

TauResult tau_asym(const TauRequest& req, std::optional<int> N, const TauOptions& opt) {
  if (N && *N < 0) throw DomainError("tau_asym: N must be non-negative");
  if (req.kr < opt.asym_min_kr)
    throw DomainError("tau_asym: kr below the configured minimum for the expansion");
  return with_sign(req, opt, [&](const Signed& w) {
    const Complex a = w.a;
    const int l = w.l;
    std::vector<Complex> d_rec;
    if (w.gamma == 0.0) d_rec = f22::d_coeffs_recursive(a, l, opt.asym_scan_terms + 1).d;
    const Complex al = sf::pochhammer(a, l);
    Complex p{1.0, 0.0};  // (1-a)_n z^{-n}
    int p_at = 0;
    Complex two_over_z_n{1.0, 0.0};
    int q_at = 0;
    auto term = [&](int n) -> Complex {
      if (!d_rec.empty()) {
        for (; q_at < n; ++q_at) two_over_z_n *= 2.0 / w.z;
        return d_rec[n] * two_over_z_n;
      }
      for (; p_at < n; ++p_at) p *= (1.0 - a + double(p_at)) / w.z;
      return p * al / sf::pochhammer(a - double(n), l) * sf::terminating_3f2_unit(l, n, a);
    };
    const auto ts = cdpw::detail::optimal_truncation(term, opt.asym_scan_terms, N, "tau_asym");

    const Complex out = std::polar(1.0, w.s * w.kr);
    const Complex first = w.sigma_l * out * std::exp(w.gamma * kPi / 2.0) *
                          sf::gamma_complex(a) * sf::terminating_3f1(a, l, -1.0 / w.z) /
                          Complex{0.0, 2.0 * w.s * w.kr};
    const Complex second_pre = w.sigma_l * sign_pow(l) *
                               std::polar(1.0, w.s * w.gamma * std::log(2.0 * w.kr)) *
                               std::conj(out) / Complex{0.0, -2.0 * w.s * w.kr};
    TauResult r;
    r.value = checked(first + second_pre * ts.sum, "tau_asym");
    r.method = TauMethod::Asymptotic;
    r.terms_used = ts.terms;
    r.err_estimate = std::abs(second_pre) * (ts.first_omitted + 4.0 * kEps * ts.abs_sum) +
                     8.0 * kEps * std::abs(first);
    return r;
  });
}

Complex tau_asym_leading(Sign sign, double gamma, int l, double kr) {
  validate({sign, gamma, l, kr, TauMethod::Asymptotic});
  const auto t = detail::leading_terms(sign, gamma, kr);
  const double sigma_l = sign == Sign::Post ? 1.0 : sign_pow(l);
  return sigma_l * ((t.outgoing - sign_pow(l) * t.incoming) / t.denominator);
}

namespace detail {

LeadingTerms leading_terms(Sign sign, double gamma, double kr) {
  const double s = sign == Sign::Post ? 1.0 : -1.0;
  LeadingTerms t;
  t.outgoing = std::polar(1.0, s * kr) * std::exp(gamma * kPi / 2.0) *
               sf::gamma_complex({1.0, s * gamma});
  t.incoming = std::polar(1.0, -s * kr) * std::polar(1.0, s * gamma * std::log(2.0 * kr));
  t.denominator = Complex{0.0, 2.0 * s * kr};
  return t;
}

}  // namespace detail

TauMethod auto_method(int l, double kr, const TauOptions& opt) {
  if (kr > opt.kappa_min_kr && double(l) <= opt.kappa_l_ratio * kr) return TauMethod::KappaSplit;
  if (kr <= opt.sum1f1_max_kr && l <= opt.sum1f1_max_l) return TauMethod::Sum1F1;
  return TauMethod::Hyp2F2;
}

TauResult tau(const TauRequest& req, const TauOptions& opt) {
  validate(req);
  TauMethod m = req.method;
  if (m == TauMethod::Auto) m = auto_method(req.l, req.kr, opt);
  switch (m) {
    case TauMethod::Hyp2F2: return tau_hyp(req, opt);
    case TauMethod::IncGamma: return tau_inc_gamma(req, opt);
    case TauMethod::Sum1F1: return tau_1f1_sum(req, opt);
    case TauMethod::KappaSplit: return tau_kappa(req, opt);
    case TauMethod::Asymptotic: return tau_asym(req, opt.asym_N, opt);
    case TauMethod::Quadrature: return tau_quadrature(req, opt);
    case TauMethod::Auto: break;
  }
  throw DomainError("tau: unresolved method");
}

}  // namespace cdpw::pw

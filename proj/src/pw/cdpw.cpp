#include "cdpw/pw.hpp"
#include "tau_detail.hpp"

namespace cdpw::pw {

double legendre_p(int l, double x) {
  if (l < 0) throw DomainError("legendre_p: l must be non-negative");
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

LegendreTestFunction::LegendreTestFunction(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw DomainError("LegendreTestFunction: at least one coefficient is required");
  if (static_cast<int>(c_.size()) > kMaxDegree + 1)
    throw DomainError("LegendreTestFunction: degree above 64");
  for (Complex c : c_)
    if (!is_finite(c)) throw DomainError("LegendreTestFunction: non-finite coefficient");
}

Complex LegendreTestFunction::forward() const {
  CompensatedSum s;
  for (Complex c : c_) s.add(c);
  return s.value();
}

Complex LegendreTestFunction::backward() const {
  CompensatedSum s;
  for (std::size_t l = 0; l < c_.size(); ++l) s.add(sign_pow(static_cast<int>(l)) * c_[l]);
  return s.value();
}

namespace {

void check_point(AngularPoint pt) {
  if (!(std::abs(pt.cos_theta) <= 1.0)) throw DomainError("AngularPoint: |cos theta| must be <= 1");
}

}  // namespace

Complex cdpw_direct(Sign sign, double gamma, double kr, AngularPoint pt) {
  check_point(pt);
  if (!(kr > 0.0) || !std::isfinite(kr)) throw DomainError("cdpw_direct: kr must be positive");
  if (!std::isfinite(gamma)) throw DomainError("cdpw_direct: gamma must be finite");
  const double s = sign == Sign::Post ? 1.0 : -1.0;
  const double base = kr * (1.0 - s * pt.cos_theta);
  if (!(base > 0.0))
    throw DomainError(std::string("cdpw_direct: excluded direction (cos theta = ") +
                      (s > 0 ? "+1" : "-1") + " makes the base kr -+ k.r vanish)");
  return std::polar(1.0, kr * pt.cos_theta + s * gamma * std::log(base));
}

Complex cdpw_pw_sum(Sign sign, double gamma, double kr, AngularPoint pt, int l_max,
                    const TauOptions& opt) {
  check_point(pt);
  if (l_max < 0 || l_max > 512) throw DomainError("cdpw_pw_sum: L_max must lie in 0..512");
  const double x = pt.cos_theta;
  CompensatedSum s;
  double p0 = 1.0, p1 = x;
  for (int l = 0; l <= l_max; ++l) {
    double p;
    if (l == 0) {
      p = 1.0;
    } else if (l == 1) {
      p = x;
    } else {
      p = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p;
    }
    const Complex t = tau({sign, gamma, l, kr, TauMethod::Auto}, opt).value;
    s.add(double(2 * l + 1) * t * p);
  }
  return s.value();
}

Asy3d asy3d_functional(Sign sign, double gamma, double kr, const LegendreTestFunction& f,
                       const TauOptions& opt) {
  validate({sign, gamma, 0, kr, TauMethod::Auto});
  CompensatedSum exact;
  const auto& c = f.coeffs();
  for (int l = 0; l <= f.degree(); ++l) {
    if (c[l] == Complex{}) continue;
    exact.add(c[l] * tau({sign, gamma, l, kr, TauMethod::Auto}, opt).value);
  }
  // Post pairs the outgoing delta with theta = 0, prior with theta = pi.
  const Complex first = sign == Sign::Post ? f.forward() : f.backward();
  const Complex second = sign == Sign::Post ? f.backward() : f.forward();
  const auto t = detail::leading_terms(sign, gamma, kr);
  Asy3d out;
  out.exact = 4.0 * kPi * exact.value();
  out.leading = 4.0 * kPi * ((t.outgoing * first - t.incoming * second) / t.denominator);
  return out;
}

}  // namespace cdpw::pw

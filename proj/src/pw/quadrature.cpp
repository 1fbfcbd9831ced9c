#include <map>
#include <memory>
#include <mutex>

#include "cdpw/pw.hpp"
#include "tau_detail.hpp"

namespace cdpw::pw {
namespace {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

GaussRule build_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Rules are built once per order and only read afterwards.
const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const GaussRule>(build_rule(n));
  return *slot;
}

constexpr int kOrder = 20;

// int_0^2 e^{i q (1-t)} t^{i g} P_l(1-t) dt with `panels` uniform panels,
// the first one replaced by `depth` geometric panels of ratio `ratio` plus the
// analytic end piece g(0) eps^{1+ig}/(1+ig).
Complex integrate(double q, double g, int l, int panels, int depth, double ratio) {
  const GaussRule& rule = gauss_rule(kOrder);
  const Complex ig{0.0, g};
  auto f = [&](double t) {
    return std::polar(1.0, q * (1.0 - t) + g * std::log(t)) * legendre_p(l, 1.0 - t);
  };
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    CompensatedSum s;
    for (int i = 0; i < kOrder; ++i) s.add(rule.w[i] * f(mid + half * rule.x[i]));
    return half * s.value();
  };
  const double w = 2.0 / panels;
  CompensatedSum total;
  for (int k = panels - 1; k >= 1; --k) total.add(panel(k * w, (k + 1) * w));
  double hi = w;
  for (int k = 0; k < depth; ++k) {
    const double lo = hi / ratio;
    total.add(panel(lo, hi));
    hi = lo;
  }
  const Complex g0 = std::polar(1.0, q);  // integrand without t^{ig} at t = 0
  total.add(g0 * std::exp((1.0 + ig) * std::log(hi)) / (1.0 + ig));
  return total.value();
}

}  // namespace

TauResult tau_quadrature(const TauRequest& req, const TauOptions& opt) {
  validate(req);
  const QuadratureOptions& q = opt.quadrature;
  if (req.kr > q.max_kr)
    throw DomainError("tau_quadrature: kr above the oscillation budget (kr <= " +
                      std::to_string(q.max_kr) + ")");
  const detail::Signed w(req);
  const double g = w.s * w.gamma;
  // Post/prior both map to t = 1 -+ x; P_l(s(1-t)) = s^l P_l(1-t).
  const Complex pre = 0.5 * std::polar(1.0, g * std::log(w.kr)) * (w.s > 0 ? 1.0 : sign_pow(w.l));

  const double period = 2.0 * kPi / w.kr;
  int panels = std::max({8, static_cast<int>(std::ceil(4.0 * 2.0 / period)), 2 * (w.l + 1)});
  int depth = 48;
  double ratio = 2.0;
  Complex prev = pre * integrate(w.s * w.kr, g, w.l, panels, depth, ratio);
  int evaluations = panels + depth;
  while (2 * panels <= q.max_panels) {
    panels *= 2;
    depth *= 2;
    ratio = std::sqrt(ratio);
    const Complex cur = pre * integrate(w.s * w.kr, g, w.l, panels, depth, ratio);
    evaluations += panels + depth;
    const double diff = std::abs(cur - prev);
    if (diff <= q.abs_tol) {
      return {checked(cur, "tau_quadrature"), TauMethod::Quadrature, evaluations * kOrder,
              diff + 64.0 * kEps * std::abs(cur), false};
    }
    prev = cur;
  }
  throw NumericalError("tau_quadrature", "tolerance not reached within the panel budget");
}

}  // namespace cdpw::pw

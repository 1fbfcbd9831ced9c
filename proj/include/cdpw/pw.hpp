#pragma once

// Partial-wave components tau_l(gamma, kr) of the Coulomb-distorted plane wave
//   e^{i k.r} (kr -+ k.r)^{+-i gamma} = sum_l (2l+1) tau_l P_l(cos theta),
// the wave itself, its Legendre reconstruction, and the leading large-r form
// applied to Legendre test functions.

#include <optional>
#include <utility>
#include <vector>

#include "cdpw/core.hpp"
#include "cdpw/f22.hpp"

namespace cdpw::pw {

enum class Sign { Post, Prior };

enum class TauMethod { Hyp2F2, IncGamma, Sum1F1, KappaSplit, Asymptotic, Quadrature, Auto };

const char* to_string(Sign s) noexcept;
const char* to_string(TauMethod m) noexcept;
/// Parses "post"/"prior" and the lower-case method names (hyp2f2, inc_gamma, ...).
Sign parse_sign(const std::string& s);
TauMethod parse_method(const std::string& s);

struct TauRequest {
  Sign sign = Sign::Post;
  double gamma = 0.0;
  int l = 0;
  double kr = 1.0;
  TauMethod method = TauMethod::Auto;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_panels = 1 << 15;  // uniform panels at the last doubling
  double max_kr = 1e3;
};

struct TauOptions {
  // Auto routing.
  double kappa_min_kr = 10.0;   // KappaSplit above this kr ...
  double kappa_l_ratio = 0.5;   // ... while l <= ratio * kr
  double sum1f1_max_kr = 10.0;
  int sum1f1_max_l = 4;
  // Asymptotic expansion.
  double asym_min_kr = 5.0;
  std::optional<int> asym_N;  // nullopt: optimal truncation
  int asym_scan_terms = 400;
  // Evaluate the prior form on its own instead of through the conjugation symmetry.
  bool independent_prior = false;
  f22::RoutingThresholds f22_routing{};
  SeriesControl series{};
  QuadratureOptions quadrature{};
};

struct TauResult {
  Complex value;
  TauMethod method = TauMethod::Auto;  // the representation actually used
  int terms_used = 0;
  double err_estimate = 0.0;  // absolute
  bool cancellation_warning = false;
};

/// Validates the request (kr > 0, finite gamma, l >= 0).
void validate(const TauRequest& req);

TauResult tau_hyp(const TauRequest& req, const TauOptions& opt = {});
TauResult tau_inc_gamma(const TauRequest& req, const TauOptions& opt = {});
TauResult tau_1f1_sum(const TauRequest& req, const TauOptions& opt = {});
TauResult tau_kappa(const TauRequest& req, const TauOptions& opt = {});
TauResult tau_asym(const TauRequest& req, std::optional<int> N = std::nullopt,
                   const TauOptions& opt = {});
TauResult tau_quadrature(const TauRequest& req, const TauOptions& opt = {});

/// Dispatches on req.method; Auto picks a representation by kr and l.
TauResult tau(const TauRequest& req, const TauOptions& opt = {});

/// Method Auto resolves to this representation for (l, kr).
TauMethod auto_method(int l, double kr, const TauOptions& opt = {});

/// Leading large-kr behaviour: both 3F1 and the d_n sum cut at their first term.
Complex tau_asym_leading(Sign sign, double gamma, int l, double kr);

/// P_l(x) by upward recurrence.
double legendre_p(int l, double x);

struct AngularPoint {
  double cos_theta = 0.0;
};

class LegendreTestFunction {
 public:
  static constexpr int kMaxDegree = 64;
  explicit LegendreTestFunction(std::vector<Complex> coeffs);
  const std::vector<Complex>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  Complex forward() const;   // f(theta = 0)
  Complex backward() const;  // f(theta = pi)

 private:
  std::vector<Complex> c_;
};

/// e^{i kr cos} (kr (1 -+ cos))^{+-i gamma}; the vanishing-base direction is rejected.
Complex cdpw_direct(Sign sign, double gamma, double kr, AngularPoint pt);

/// sum_{l <= l_max} (2l+1) tau_l P_l(cos theta), L_max <= 512.
Complex cdpw_pw_sum(Sign sign, double gamma, double kr, AngularPoint pt, int l_max,
                    const TauOptions& opt = {});

struct Asy3d {
  Complex exact;    // 4 pi sum_l c_l tau_l
  Complex leading;  // the two-delta leading form applied to f
};

Asy3d asy3d_functional(Sign sign, double gamma, double kr, const LegendreTestFunction& f,
                       const TauOptions& opt = {});

}  // namespace cdpw::pw

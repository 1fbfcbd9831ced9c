#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

namespace cdpw::cli::detail {
namespace {

using pw::Sign;
using pw::TauMethod;
using pw::TauRequest;
using pw::TauResult;

constexpr double kTauThreshold = 1e-8;
constexpr double kF22Threshold = 1e-9;
constexpr double kSymmetryThreshold = 1e-12;
constexpr double kProp1Threshold = 1e-11;
constexpr double kCoeffThreshold = 1e-12;
constexpr int kCoeffMaxN = 20;
constexpr int kCoeffMaxL = 6;

constexpr TauMethod kExactMethods[] = {TauMethod::Hyp2F2, TauMethod::IncGamma, TauMethod::Sum1F1,
                                       TauMethod::KappaSplit, TauMethod::Quadrature};

double rel_diff(Complex x, Complex y) {
  const double m = std::max(std::abs(x), std::abs(y));
  return m > 0.0 ? std::abs(x - y) / m : 0.0;
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

Complex a_for(Sign s, double gamma) { return {1.0, s == Sign::Post ? gamma : -gamma}; }
Complex z_for(Sign s, double kr) { return {0.0, s == Sign::Post ? -2.0 * kr : 2.0 * kr}; }

void require_kr(double kr) {
  if (!(kr > 0.0) || !std::isfinite(kr)) throw DomainError("kr must satisfy kr > 0");
}

void require_a(Complex a) {
  if (!is_finite(a)) throw DomainError("a must be finite");
  if (near_integer(a))
    throw DomainError("a = " + format_complex(a) + " lies within 1e-8 of an integer");
}

struct Point {
  std::string check;
  Sign sign = Sign::Post;
  double gamma = 0.0;  // tau and symmetry checks
  double kr = 0.0;
  Complex a;
  int l = 0;
  Complex z;
  int n = 0;
};

struct Outcome {
  std::string values;
  double metric = 0.0;
  double threshold = 0.0;
  bool exempt = false;
};

Outcome check_f22(const Point& p, const RunConfig& cfg) {
  const f22::F22Args args{p.a, p.l, p.z};
  const auto series = f22::f22_series(args, cfg.tau.series);
  const auto form_a = f22::f22_form_a(args, cfg.tau.series);
  const auto form_b = f22::f22_form_b(args, cfg.tau.series);
  const auto form_c = f22::f22_form_c(args);
  Outcome o;
  o.threshold = kF22Threshold;
  o.values = "series=" + format_complex(series.value) + ";form_a=" + format_complex(form_a.value) +
             ";form_b=" + format_complex(form_b.value) + ";form_c=" + format_complex(form_c.value);
  std::vector<Complex> used;
  for (const auto* r : {&series, &form_a, &form_b, &form_c}) {
    if (r->cancellation_warning)
      o.exempt = true;
    else
      used.push_back(r->value);
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    for (std::size_t j = i + 1; j < used.size(); ++j)
      o.metric = std::max(o.metric, rel_diff(used[i], used[j]));
  return o;
}

Outcome check_tau(const Point& p, const RunConfig& cfg) {
  Outcome o;
  o.threshold = kTauThreshold;
  std::vector<Complex> used;
  for (TauMethod m : kExactMethods) {
    const TauResult r = pw::tau({p.sign, p.gamma, p.l, p.kr, m}, cfg.tau);
    if (!o.values.empty()) o.values += ';';
    o.values += std::string(pw::to_string(m)) + '=' + format_complex(r.value);
    if (r.cancellation_warning)
      o.exempt = true;
    else
      used.push_back(r.value);
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    for (std::size_t j = i + 1; j < used.size(); ++j)
      o.metric = std::max(o.metric, rel_diff(used[i], used[j]));
  return o;
}

Outcome check_symmetry(const Point& p, const RunConfig& cfg) {
  pw::TauOptions opt = cfg.tau;
  opt.independent_prior = true;
  Outcome o;
  o.threshold = kSymmetryThreshold;
  for (TauMethod m : kExactMethods) {
    const Complex post = pw::tau({Sign::Post, p.gamma, p.l, p.kr, m}, opt).value;
    const Complex prior = pw::tau({Sign::Prior, p.gamma, p.l, p.kr, m}, opt).value;
    if (!o.values.empty()) o.values += ';';
    o.values += std::string(pw::to_string(m)) + '=' + format_complex(prior);
    o.metric = std::max(o.metric, rel_diff(prior, sign_pow(p.l) * std::conj(post)));
  }
  return o;
}

Outcome check_prop1(const Point& p, const RunConfig&) {
  Outcome o;
  o.threshold = kProp1Threshold;
  o.metric = f22::prop1_residual(p.a, p.l, p.z);
  o.values = "residual=" + format_complex(o.metric);
  return o;
}

Outcome check_coeffs(const Point& p, const RunConfig&) {
  Outcome o;
  o.threshold = kCoeffThreshold;
  const auto rec = f22::d_coeffs_recursive(p.a, p.l, p.n);
  int worst = 0;
  for (int n = 0; n <= p.n; ++n) {
    const double d = rel_diff(rec.d[n], f22::d_coeff_closed(p.a, p.l, n));
    if (d > o.metric) {
      o.metric = d;
      worst = n;
    }
  }
  o.values = "worst_n=" + std::to_string(worst);
  return o;
}

Outcome run_check(const Point& p, const RunConfig& cfg) {
  if (p.check == "f22") return check_f22(p, cfg);
  if (p.check == "tau") return check_tau(p, cfg);
  if (p.check == "symmetry") return check_symmetry(p, cfg);
  if (p.check == "prop1") return check_prop1(p, cfg);
  return check_coeffs(p, cfg);
}

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> checks{"f22", "tau", "symmetry", "prop1", "coeffs"};
  return checks;
}

struct Sample {
  double gamma;
  double kr;
  int l;
};

std::vector<Point> build_points(const ValidateArgs& args, const RunConfig& cfg) {
  const std::vector<double> default_gammas{0.25, 0.5, 1.0, 2.0};
  const std::vector<double> f22_kr{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0};
  const std::vector<double> tau_kr{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  const auto& gammas = args.gammas.empty() ? default_gammas : args.gammas;
  for (double g : gammas)
    if (!std::isfinite(g)) throw DomainError("gamma must be finite");
  for (double kr : args.kr) require_kr(kr);
  for (Complex a : args.a_values) require_a(a);
  if (args.random < 0) throw DomainError("--random must be >= 0");

  std::vector<Sample> random;
  if (args.random > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> gamma_dist(0.1, 3.0), kr_dist(0.1, 30.0);
    std::uniform_int_distribution<int> l_dist(0, 8);
    for (int i = 0; i < args.random; ++i) {
      const double g = gamma_dist(rng);
      const double kr = kr_dist(rng);
      random.push_back({g, kr, l_dist(rng)});
    }
  }
  auto lmax_or = [&](int fallback) { return args.lmax >= 0 ? args.lmax : fallback; };

  std::vector<Point> points;
  for (const std::string& check : args.only.empty() ? all_checks() : args.only) {
    if (std::find(all_checks().begin(), all_checks().end(), check) == all_checks().end())
      throw DomainError("unknown check '" + check + "' (expected f22, tau, symmetry, prop1 or coeffs)");
    const bool on_a = check == "f22" || check == "prop1" || check == "coeffs";
    if (check == "coeffs") {
      auto add_coeff = [&](Complex a, int l) {
        Point p;
        p.check = check;
        p.a = a;
        p.l = l;
        p.n = kCoeffMaxN;
        points.push_back(p);
      };
      if (!random.empty() && args.a_values.empty()) {
        for (const auto& smp : random) add_coeff(a_for(Sign::Post, smp.gamma), smp.l);
        continue;
      }
      std::vector<Complex> as = args.a_values;
      if (as.empty())
        for (double g : gammas) as.insert(as.end(), {a_for(Sign::Post, g), a_for(Sign::Prior, g)});
      for (Complex a : as)
        for (int l = 0; l <= lmax_or(kCoeffMaxL); ++l) add_coeff(a, l);
      continue;
    }
    auto add = [&](Sign s, double g, int l, double kr, std::optional<Complex> a) {
      Point p;
      p.check = check;
      p.sign = s;
      p.gamma = g;
      p.kr = kr;
      p.l = l;
      p.a = a ? *a : a_for(s, g);
      p.z = a ? z_for(Sign::Post, kr) : z_for(s, kr);
      points.push_back(p);
    };
    const auto& krs = args.kr.empty() ? (on_a ? f22_kr : tau_kr) : args.kr;
    if (!random.empty()) {
      for (const auto& smp : random)
        for (Sign s : {Sign::Post, Sign::Prior}) {
          if (check == "symmetry" && s == Sign::Prior) continue;
          add(s, smp.gamma, smp.l, smp.kr, std::nullopt);
        }
      continue;
    }
    const int lmax = lmax_or(on_a ? 5 : 8);
    if (on_a && !args.a_values.empty()) {
      for (Complex a : args.a_values)
        for (int l = 0; l <= lmax; ++l)
          for (double kr : krs) add(Sign::Post, 0.0, l, kr, a);
      continue;
    }
    for (double g : gammas)
      for (int l = 0; l <= lmax; ++l)
        for (double kr : krs) {
          add(Sign::Post, g, l, kr, std::nullopt);
          if (check != "symmetry") add(Sign::Prior, g, l, kr, std::nullopt);
        }
  }
  return points;
}

}  // namespace

int cmd_eval(const EvalArgs& args, const RunConfig& cfg, Table& table, std::ostream&) {
  if (args.kr.empty()) throw DomainError("eval needs at least one --kr value");
  for (double kr : args.kr) pw::validate({args.sign, args.gamma, args.l, kr, args.method});
  const auto results = parallel_map(args.kr.size(), cfg.threads, [&](std::size_t i) {
    return pw::tau({args.sign, args.gamma, args.l, args.kr[i], args.method}, cfg.tau);
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TauResult& r = results[i];
    table.add_row({pw::to_string(args.sign), args.gamma, static_cast<long long>(args.l), args.kr[i],
                   pw::to_string(r.method), r.value.real(), r.value.imag(),
                   static_cast<long long>(r.terms_used), r.err_estimate, r.cancellation_warning});
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& args, const RunConfig& cfg, Table& table, std::ostream& err) {
  const std::vector<Point> points = build_points(args, cfg);
  const auto outcomes =
      parallel_map(points.size(), cfg.threads, [&](std::size_t i) { return run_check(points[i], cfg); });

  struct Summary {
    long long points = 0, exempt = 0, failures = 0;
    double max_metric = 0.0;
  };
  std::vector<std::pair<std::string, Summary>> summaries;
  auto summary_for = [&](const std::string& check) -> Summary& {
    for (auto& [k, s] : summaries)
      if (k == check) return s;
    return summaries.emplace_back(check, Summary{}).second;
  };

  long long failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const Outcome& o = outcomes[i];
    const bool pass = std::isfinite(o.metric) && o.metric < o.threshold;
    Summary& s = summary_for(p.check);
    ++s.points;
    s.exempt += o.exempt;
    s.max_metric = std::max(s.max_metric, o.metric);
    if (!pass) {
      ++s.failures;
      ++failures;
      err << "validate: " << p.check << " failed at a=" << format_complex(p.a) << " l=" << p.l
          << " z=" << format_complex(p.z) << " metric=" << o.metric << '\n';
    }
    table.add_row({p.check, p.a.real(), p.a.imag(), static_cast<long long>(p.l), p.z.real(),
                   p.z.imag(), static_cast<long long>(p.n), o.values, o.metric, o.threshold,
                   o.exempt, pass});
  }
  for (const auto& [check, s] : summaries) {
    table.add_note(check + ".points", s.points);
    table.add_note(check + ".exempt", s.exempt);
    table.add_note(check + ".max_metric", s.max_metric);
    table.add_note(check + ".failures", s.failures);
  }
  table.add_note("pass", failures == 0);
  return failures == 0 ? kExitOk : kExitValidationFailure;
}

int cmd_coeffs(const CoeffsArgs& args, const RunConfig&, Table& table, std::ostream&) {
  if (args.N < 0 || args.N > 64) throw DomainError("coeffs: N must lie in 0..64");
  if (args.l < 0) throw DomainError("coeffs: l must be >= 0");
  if (!std::isfinite(args.gamma)) throw DomainError("coeffs: gamma must be finite");
  const Complex a = a_for(args.sign, args.gamma);
  require_a(a);
  const auto rec = f22::d_coeffs_recursive(a, args.l, args.N);
  for (int n = 0; n <= args.N; ++n) {
    const Complex closed = f22::d_coeff_closed(a, args.l, n);
    table.add_row({static_cast<long long>(n), rec.d[n].real(), rec.d[n].imag(), closed.real(),
                   closed.imag(), rel_diff(rec.d[n], closed)});
  }
  return kExitOk;
}

int cmd_asym_compare(const AsymArgs& args, const RunConfig& cfg, Table& table, std::ostream& err) {
  if (args.kr.empty()) throw DomainError("asymp-compare needs at least one --kr value");
  for (double kr : args.kr) {
    pw::validate({args.sign, args.gamma, args.l, kr, TauMethod::Asymptotic});
    if (kr < cfg.tau.asym_min_kr)
      throw DomainError("asymp-compare: kr = " + std::to_string(kr) +
                        " is below the asymptotic minimum " + std::to_string(cfg.tau.asym_min_kr));
  }
  if (args.N && *args.N < 0) throw DomainError("asymp-compare: N must be >= 0");

  struct Row {
    TauResult exact, asym;
    bool flagged = false;
    std::string note;
  };
  const auto rows = parallel_map(args.kr.size(), cfg.threads, [&](std::size_t i) {
    const TauRequest req{args.sign, args.gamma, args.l, args.kr[i], TauMethod::KappaSplit};
    Row r;
    r.exact = pw::tau_kappa(req, cfg.tau);
    try {
      r.asym = pw::tau_asym(req, args.N, cfg.tau);
    } catch (const DivergenceOnset& e) {
      r.flagged = true;
      r.note = e.what();
      r.asym = pw::tau_asym(req, std::nullopt, cfg.tau);
    }
    return r;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double kr = args.kr[i];
    const double diff = std::abs(r.asym.value - r.exact.value);
    const int n_used = std::max(r.asym.terms_used - 1, 0);
    if (r.flagged)
      err << "warning: kr=" << kr << ": " << r.note << "; row evaluated at the optimal truncation\n";
    table.add_row({kr, r.exact.value.real(), r.exact.value.imag(), r.asym.value.real(),
                   r.asym.value.imag(), diff, r.asym.err_estimate,
                   diff * std::pow(kr, double(n_used + 1)), static_cast<long long>(n_used),
                   r.flagged});
  }
  return kExitOk;
}

int cmd_reconstruct(const ReconstructArgs& args, const RunConfig& cfg, Table& table, std::ostream&) {
  if (args.cos_theta.empty()) throw DomainError("reconstruct needs at least one --cos value");
  if (args.lmax < 0) throw DomainError("reconstruct: lmax must be >= 0");
  for (double c : args.cos_theta) {
    if (!(std::abs(c) <= 1.0)) throw DomainError("reconstruct: cos theta must lie in [-1, 1]");
    pw::cdpw_direct(args.sign, args.gamma, args.kr, {c});
  }
  struct Row {
    Complex direct, sum;
  };
  const auto rows = parallel_map(args.cos_theta.size(), cfg.threads, [&](std::size_t i) {
    const pw::AngularPoint pt{args.cos_theta[i]};
    return Row{pw::cdpw_direct(args.sign, args.gamma, args.kr, pt),
               pw::cdpw_pw_sum(args.sign, args.gamma, args.kr, pt, args.lmax, cfg.tau)};
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double diff = std::abs(rows[i].direct - rows[i].sum);
    worst = std::max(worst, diff);
    table.add_row({args.cos_theta[i], rows[i].direct.real(), rows[i].direct.imag(), rows[i].sum.real(),
                   rows[i].sum.imag(), diff});
  }
  table.add_note("max_abs_diff", worst);
  return kExitOk;
}

int cmd_asy3d(const Asy3dArgs& args, const RunConfig& cfg, Table& table, std::ostream&) {
  if (args.kr.empty()) throw DomainError("asy3d needs at least one --kr value");
  const pw::LegendreTestFunction f(args.coeffs);
  for (double kr : args.kr) require_kr(kr);
  std::vector<double> gammas{args.gamma};
  if (args.gamma != 0.0) gammas.push_back(0.0);
  std::vector<std::pair<double, double>> jobs;
  for (double g : gammas)
    for (double kr : args.kr) jobs.emplace_back(g, kr);
  const auto rows = parallel_map(jobs.size(), cfg.threads, [&](std::size_t i) {
    return pw::asy3d_functional(args.sign, jobs[i].first, jobs[i].second, f, cfg.tau);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [g, kr] = jobs[i];
    const double diff = std::abs(rows[i].exact - rows[i].leading);
    table.add_row({g, kr, rows[i].exact.real(), rows[i].exact.imag(), rows[i].leading.real(),
                   rows[i].leading.imag(), diff, kr * diff});
  }
  return kExitOk;
}

}  // namespace cdpw::cli::detail

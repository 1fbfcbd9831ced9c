#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cdpw::cli {
namespace {

using detail::Asy3dArgs;
using detail::AsymArgs;
using detail::CoeffsArgs;
using detail::EvalArgs;
using detail::ReconstructArgs;
using detail::ValidateArgs;

std::vector<Complex> parse_complex_list(const std::vector<std::string>& items) {
  std::vector<Complex> out;
  for (const auto& s : items) out.push_back(parse_complex(s));
  return out;
}

struct Globals {
  std::string format;
  std::string config;
  std::uint64_t seed = 0;
  std::string out_path;
  int threads = 0;
  int precision = 0;
  CLI::Option* format_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* precision_opt = nullptr;
};

RunConfig resolve_config(const Globals& g) {
  RunConfig cfg;
  std::string path = g.config;
  if (path.empty())
    if (const char* env = std::getenv("CDPW_CONFIG"); env && *env) path = env;
  if (!path.empty()) apply_config_file(cfg, path);
  if (g.format_opt->count()) apply_setting(cfg, "format", g.format);
  if (g.seed_opt->count()) cfg.seed = g.seed;
  if (g.threads_opt->count()) cfg.threads = g.threads;
  if (g.precision_opt->count()) cfg.csv_precision = g.precision;
  cfg.validate();
  return cfg;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coulomb-distorted plane wave: partial waves, 2F2 representations and asymptotics",
               "cdpw"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.format_opt = app.add_option("--format", g.format, "Output format")
                     ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "key=value config file (default: $CDPW_CONFIG)");
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for randomized grids");
  app.add_option("--out", g.out_path, "Write the table to this file instead of stdout");
  g.threads_opt = app.add_option("--threads", g.threads, "Worker threads");
  g.precision_opt = app.add_option("--precision", g.precision, "Significant digits in CSV output");

  auto sign_option = [](CLI::App* sub, std::string& target) {
    sub->add_option("--sign", target, "post or prior")
        ->check(CLI::IsMember({"post", "prior"}))
        ->capture_default_str();
  };

  std::string sign = "post";
  std::string method = "auto";
  std::string n_text = "auto";
  EvalArgs eval;
  ValidateArgs validate;
  std::vector<std::string> a_text;
  CoeffsArgs coeffs;
  AsymArgs asym;
  ReconstructArgs recon;
  Asy3dArgs asy3d;
  std::vector<std::string> coeff_text;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate tau_l at one or more kr");
  sign_option(eval_cmd, sign);
  eval_cmd->add_option("--gamma", eval.gamma, "Sommerfeld parameter")->required();
  eval_cmd->add_option("--l", eval.l, "Partial wave")->required();
  eval_cmd->add_option("--kr", eval.kr, "kr values")->required();
  eval_cmd->add_option("--method", method, "hyp2f2, inc_gamma, sum_1f1, kappa_split, asymptotic, quadrature or auto")
      ->capture_default_str();

  auto* val_cmd = app.add_subcommand("validate", "Cross-check representations over a grid");
  val_cmd->add_option("--only", validate.only, "Checks: f22, tau, symmetry, prop1, coeffs");
  val_cmd->add_option("--gamma", validate.gammas, "gamma grid");
  val_cmd->add_option("--a", a_text, "Explicit a values for the f22, prop1 and coeffs checks");
  val_cmd->add_option("--kr", validate.kr, "kr grid");
  val_cmd->add_option("--lmax", validate.lmax, "Largest l");
  val_cmd->add_option("--random", validate.random, "Random points drawn from --seed");

  auto* coeffs_cmd = app.add_subcommand("coeffs", "Asymptotic coefficients d_n by both engines");
  sign_option(coeffs_cmd, sign);
  coeffs_cmd->add_option("--gamma", coeffs.gamma, "Sommerfeld parameter")->required();
  coeffs_cmd->add_option("--l", coeffs.l, "Partial wave")->required();
  coeffs_cmd->add_option("--N", coeffs.N, "Largest n (<= 64)")->capture_default_str();

  auto* asym_cmd = app.add_subcommand("asymp-compare", "Asymptotic tau_l against the exact value");
  sign_option(asym_cmd, sign);
  asym_cmd->add_option("--gamma", asym.gamma, "Sommerfeld parameter")->required();
  asym_cmd->add_option("--l", asym.l, "Partial wave")->required();
  asym_cmd->add_option("--kr", asym.kr, "kr values")->required();
  asym_cmd->add_option("--N", n_text, "Truncation order or auto")->capture_default_str();

  auto* recon_cmd = app.add_subcommand("reconstruct", "Partial-wave sum against the closed form");
  sign_option(recon_cmd, sign);
  recon_cmd->add_option("--gamma", recon.gamma, "Sommerfeld parameter")->required();
  recon_cmd->add_option("--kr", recon.kr, "kr")->required();
  recon_cmd->add_option("--cos", recon.cos_theta, "cos theta values")->required();
  recon_cmd->add_option("--lmax", recon.lmax, "Largest l")->capture_default_str();

  auto* asy3d_cmd = app.add_subcommand("asy3d", "Leading large-kr form on a Legendre test function");
  sign_option(asy3d_cmd, sign);
  asy3d_cmd->add_option("--gamma", asy3d.gamma, "Sommerfeld parameter")->required();
  asy3d_cmd->add_option("--coeffs", coeff_text, "Legendre coefficients c_0 .. c_L")->required();
  asy3d_cmd->add_option("--kr", asy3d.kr, "kr values")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_stream;
    const int code = app.exit(e, o, e_stream);
    out << o.str();
    err << e_stream.str();
    return code == 0 ? kExitOk : kExitBadInput;
  }

  const RunConfig cfg = resolve_config(g);
  std::vector<std::string> columns;
  std::function<int(Table&)> command;
  const pw::Sign s = pw::parse_sign(sign);

  if (*eval_cmd) {
    eval.sign = s;
    eval.method = pw::parse_method(method);
    columns = {"sign", "gamma", "l", "kr", "method", "re", "im", "terms_used", "err_estimate",
               "cancellation_warning"};
    command = [&](Table& t) { return detail::cmd_eval(eval, cfg, t, err); };
  } else if (*val_cmd) {
    validate.a_values = parse_complex_list(a_text);
    columns = {"check", "a_re", "a_im", "l", "z_re", "z_im", "n", "values", "metric", "threshold",
               "exempt", "pass"};
    command = [&](Table& t) { return detail::cmd_validate(validate, cfg, t, err); };
  } else if (*coeffs_cmd) {
    coeffs.sign = s;
    columns = {"n", "rec_re", "rec_im", "closed_re", "closed_im", "rel_diff"};
    command = [&](Table& t) { return detail::cmd_coeffs(coeffs, cfg, t, err); };
  } else if (*asym_cmd) {
    asym.sign = s;
    if (n_text != "auto") {
      int n = 0;
      const auto [p, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
      if (ec != std::errc{} || p != n_text.data() + n_text.size())
        throw DomainError("--N expects a non-negative integer or auto, got '" + n_text + "'");
      asym.N = n;
    }
    columns = {"kr", "exact_re", "exact_im", "asym_re", "asym_im", "abs_diff", "err_estimate",
               "scaled_diff", "N", "flagged"};
    command = [&](Table& t) { return detail::cmd_asym_compare(asym, cfg, t, err); };
  } else if (*recon_cmd) {
    recon.sign = s;
    columns = {"cos_theta", "direct_re", "direct_im", "sum_re", "sum_im", "abs_diff"};
    command = [&](Table& t) { return detail::cmd_reconstruct(recon, cfg, t, err); };
  } else {
    asy3d.sign = s;
    asy3d.coeffs = parse_complex_list(coeff_text);
    columns = {"gamma", "kr", "exact_re", "exact_im", "leading_re", "leading_im", "abs_diff",
               "scaled_diff"};
    command = [&](Table& t) { return detail::cmd_asy3d(asy3d, cfg, t, err); };
  }

  Table table(columns);
  const int code = command(table);
  if (g.out_path.empty()) {
    table.write(out, cfg.format, cfg.csv_precision);
  } else {
    std::ofstream file(g.out_path);
    if (!file) throw DomainError("cannot open '" + g.out_path + "' for writing");
    table.write(file, cfg.format, cfg.csv_precision);
    if (!file) throw NumericalError("output", "write to '" + g.out_path + "' failed");
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const NumericalError& e) {
    err << "error: numerical failure in " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace cdpw::cli

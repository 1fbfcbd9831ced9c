#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cdpw/cli.hpp"

namespace cdpw::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x))
    throw DomainError("config: '" + std::string(key) + "' expects a number, got '" +
                      std::string(v) + "'");
  return x;
}

long long to_integer(std::string_view key, std::string_view v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw DomainError("config: '" + std::string(key) + "' expects an integer, got '" +
                      std::string(v) + "'");
  return x;
}

int to_int(std::string_view key, std::string_view v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw DomainError("config: '" + std::string(key) + "' is out of range");
  return static_cast<int>(x);
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"format",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "csv")
           c.format = Format::Csv;
         else if (v == "json")
           c.format = Format::Json;
         else
           throw DomainError("config: '" + std::string(k) + "' must be csv or json");
       }},
      {"csv_precision",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.csv_precision = to_int(k, v); }},
      {"seed",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.seed = static_cast<std::uint64_t>(to_integer(k, v));
       }},
      {"threads",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.threads = to_int(k, v); }},
      {"rel_tol",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.series.rel_tol = to_double(k, v);
       }},
      {"max_series_terms",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.series.max_terms = to_int(k, v);
       }},
      {"quadrature_tol",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.quadrature.abs_tol = to_double(k, v);
       }},
      {"quadrature_budget",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.quadrature.max_panels = to_int(k, v);
       }},
      {"quadrature_max_kr",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.quadrature.max_kr = to_double(k, v);
       }},
      {"kappa_min_kr",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.kappa_min_kr = to_double(k, v);
       }},
      {"kappa_l_ratio",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.kappa_l_ratio = to_double(k, v);
       }},
      {"sum1f1_max_kr",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.sum1f1_max_kr = to_double(k, v);
       }},
      {"sum1f1_max_l",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.tau.sum1f1_max_l = to_int(k, v); }},
      {"asym_min_kr",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.asym_min_kr = to_double(k, v);
       }},
      {"asym_scan_terms",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.asym_scan_terms = to_int(k, v);
       }},
      {"f22_form_a_max_abs_z",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.form_a_max_abs_z = to_double(k, v);
       }},
      {"f22_form_a_max_l",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.form_a_max_l = to_int(k, v);
       }},
      {"f22_series_max_abs_z",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.series_max_abs_z = to_double(k, v);
       }},
      {"f22_form_c_max_abs_z",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.form_c_max_abs_z = to_double(k, v);
       }},
      {"f22_series_l_ratio",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.series_l_ratio = to_double(k, v);
       }},
      {"f22_series_hard_max_abs_z",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.tau.f22_routing.series_hard_max_abs_z = to_double(k, v);
       }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0)) throw DomainError(std::string("config: ") + what + " must be > 0");
  };
  positive(tau.series.rel_tol, "rel_tol");
  positive(tau.series.max_terms, "max_series_terms");
  positive(tau.quadrature.abs_tol, "quadrature_tol");
  positive(tau.quadrature.max_panels, "quadrature_budget");
  positive(tau.quadrature.max_kr, "quadrature_max_kr");
  positive(tau.kappa_min_kr, "kappa_min_kr");
  positive(tau.kappa_l_ratio, "kappa_l_ratio");
  positive(tau.sum1f1_max_kr, "sum1f1_max_kr");
  positive(tau.asym_min_kr, "asym_min_kr");
  positive(tau.asym_scan_terms, "asym_scan_terms");
  positive(tau.f22_routing.form_a_max_abs_z, "f22_form_a_max_abs_z");
  positive(tau.f22_routing.series_max_abs_z, "f22_series_max_abs_z");
  positive(tau.f22_routing.form_c_max_abs_z, "f22_form_c_max_abs_z");
  positive(tau.f22_routing.series_l_ratio, "f22_series_l_ratio");
  positive(tau.f22_routing.series_hard_max_abs_z, "f22_series_hard_max_abs_z");
  if (tau.sum1f1_max_l < 0) throw DomainError("config: sum1f1_max_l must be >= 0");
  if (tau.f22_routing.form_a_max_l < 0) throw DomainError("config: f22_form_a_max_l must be >= 0");
  if (csv_precision < 1 || csv_precision > 17)
    throw DomainError("config: csv_precision must lie in 1..17");
  if (threads < 1 || threads > 256) throw DomainError("config: threads must lie in 1..256");
  tau.series.validate();
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& t = setters();
  const auto it = t.find(key);
  if (it == t.end()) throw DomainError("config: unknown key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw DomainError(origin + ":" + std::to_string(number) + ": expected key=value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    try {
      apply_setting(cfg, key, value);
    } catch (const DomainError& e) {
      throw DomainError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(cfg, text.str(), path);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

Complex parse_complex(std::string_view s) {
  const std::string t = trim(s);
  auto fail = [&]() -> Complex {
    throw DomainError("cannot parse complex number '" + std::string(s) + "'");
  };
  if (t.empty()) return fail();
  auto number = [&](std::string_view part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    if (part.front() == '+') part.remove_prefix(1);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (ec != std::errc{} || p != part.data() + part.size() || !std::isfinite(x)) fail();
    return x;
  };
  const std::string_view v = t;
  if (v.back() != 'i') return {number(v), 0.0};
  const std::string_view body = v.substr(0, v.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, number(body)};
  return {number(body.substr(0, split)), number(body.substr(split))};
}

}  // namespace cdpw::cli

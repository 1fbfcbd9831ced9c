#pragma once

#include <atomic>
#include <exception>
#include <optional>
#include <thread>

#include "cdpw/cli.hpp"

namespace cdpw::cli::detail {

/// f(0..n-1) on up to `threads` workers; results and the first error (by
/// index) come back in input order.
template <class F>
auto parallel_map(std::size_t n, int threads, F&& f) {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t extra = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1)) - 1;
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct EvalArgs {
  pw::Sign sign = pw::Sign::Post;
  double gamma = 0.0;
  int l = 0;
  std::vector<double> kr;
  pw::TauMethod method = pw::TauMethod::Auto;
};

struct ValidateArgs {
  std::vector<std::string> only;  // subset of f22, tau, symmetry, prop1, coeffs
  std::vector<double> gammas;     // empty: default grid
  std::vector<Complex> a_values;  // replaces 1 +- i gamma in the f22, prop1 and coeffs checks
  std::vector<double> kr;         // empty: default grid
  int lmax = -1;                  // negative: default grid
  int random = 0;                 // > 0: random points instead of the grid
};

struct CoeffsArgs {
  pw::Sign sign = pw::Sign::Post;
  double gamma = 0.0;
  int l = 0;
  int N = 10;
};

struct AsymArgs {
  pw::Sign sign = pw::Sign::Post;
  double gamma = 0.0;
  int l = 0;
  std::vector<double> kr;
  std::optional<int> N;  // nullopt: optimal truncation
};

struct ReconstructArgs {
  pw::Sign sign = pw::Sign::Post;
  double gamma = 0.0;
  double kr = 1.0;
  std::vector<double> cos_theta;
  int lmax = 60;
};

struct Asy3dArgs {
  pw::Sign sign = pw::Sign::Post;
  double gamma = 0.0;
  std::vector<Complex> coeffs;
  std::vector<double> kr;
};

/// Each command fills `table` and returns an exit code; bad input throws
/// DomainError and numerical failures throw NumericalError.
int cmd_eval(const EvalArgs& args, const RunConfig& cfg, Table& table, std::ostream& err);
int cmd_validate(const ValidateArgs& args, const RunConfig& cfg, Table& table, std::ostream& err);
int cmd_coeffs(const CoeffsArgs& args, const RunConfig& cfg, Table& table, std::ostream& err);
int cmd_asym_compare(const AsymArgs& args, const RunConfig& cfg, Table& table, std::ostream& err);
int cmd_reconstruct(const ReconstructArgs& args, const RunConfig& cfg, Table& table,
                    std::ostream& err);
int cmd_asy3d(const Asy3dArgs& args, const RunConfig& cfg, Table& table, std::ostream& err);

}  // namespace cdpw::cli::detail

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdpw {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEps = 2.220446049250313e-16;

/// Distance below which a parameter is treated as sitting on an excluded integer.
inline constexpr double kIntegerGuard = 1e-8;

/// Argument outside the domain of an operation (pole, branch point, excluded direction, bad size).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-posed evaluation that could not be carried out to the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Thrown when an asymptotic expansion is asked for more terms than it can usefully give.
class DivergenceOnset : public NumericalError {
 public:
  DivergenceOnset(const std::string& where, int requested, int optimal)
      : NumericalError(where, "requested " + std::to_string(requested) +
                                  " terms but the expansion starts to diverge after " +
                                  std::to_string(optimal)),
        requested_(requested),
        optimal_(optimal) {}
  int requested() const noexcept { return requested_; }
  int optimal() const noexcept { return optimal_; }

 private:
  int requested_;
  int optimal_;
};

struct SeriesControl {
  double rel_tol = 1e-13;
  int max_terms = 10000;

  void validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
      throw DomainError("SeriesControl: rel_tol must be positive");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  }
};

enum class Method { Series, FormA, FormB, FormC, Asymptotic };

const char* to_string(Method m) noexcept;

struct EvalResult {
  Complex value;
  Method method = Method::Series;
  int terms_used = 0;
  double err_estimate = 0.0;  // absolute
  bool cancellation_warning = false;
};

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Rejects NaN/Inf before it can leave a public operation.
inline Complex checked(Complex z, const char* where) {
  if (!is_finite(z)) throw NumericalError(where, "non-finite result");
  return z;
}

inline Complex ipow(int n) noexcept {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double sign_pow(int n) noexcept { return (n % 2 == 0) ? 1.0 : -1.0; }

/// Distance from z to the nearest integer (measured in the complex plane).
inline double integer_distance(Complex z) noexcept {
  return std::abs(z - std::round(z.real()));
}

inline bool near_integer(Complex z, double tol = kIntegerGuard) noexcept {
  return integer_distance(z) < tol;
}

inline bool near_nonpositive_integer(Complex z, double tol = kIntegerGuard) noexcept {
  return std::round(z.real()) <= 0.0 && integer_distance(z) < tol;
}

/// Exactly a non-positive integer (no tolerance).
inline bool is_nonpositive_integer(Complex z) noexcept {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

/// Kahan-Babuska (Neumaier) compensated accumulator for complex terms.
class CompensatedSum {
 public:
  void add(Complex t) noexcept {
    re_.add(t.real());
    im_.add(t.imag());
  }
  Complex value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  struct Lane {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) noexcept {
      const double t = sum + x;
      if (std::abs(sum) >= std::abs(x))
        carry += (sum - t) + x;
      else
        carry += (x - t) + sum;
      sum = t;
    }
    double value() const noexcept { return sum + carry; }
  };
  Lane re_, im_;
};

/// Compensated sum of a finite term list, accumulated in ascending magnitude.
Complex sum_ascending(std::vector<Complex> terms);

/// Sum of |t| over the list; used for cancellation diagnostics.
double abs_sum(std::span<const Complex> terms) noexcept;

}  // namespace cdpw

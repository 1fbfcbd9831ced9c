#pragma once

#include <optional>
#include <vector>

#include "cdpw/core.hpp"

namespace cdpw::detail {

struct TruncatedSum {
  Complex sum;
  int terms = 0;             // number of terms included
  int optimal_terms = 0;     // terms kept by optimal truncation (>= terms when N was forced)
  double first_omitted = 0;  // |first term left out|
  double abs_sum = 0;        // sum of |included terms|
  bool terminated = false;   // the series hit an exact zero term and is finite
};

/// Sums a (possibly divergent) asymptotic series term(0), term(1), ...
///
/// Scans up to n_max terms and truncates just before the smallest one.  The
/// scan stops early on an exact zero term (finite series) or once terms drop
/// below a quarter ulp of the partial sum while still decreasing.  With
/// `forced` set, exactly forced+1 terms are kept, and DivergenceOnset is
/// thrown when that lies past the smallest term.
template <class TermFn>
TruncatedSum optimal_truncation(TermFn&& term, int n_max, std::optional<int> forced,
                                const char* where) {
  std::vector<Complex> t;
  const int scan = forced ? std::max(n_max, *forced + 1) : n_max;
  CompensatedSum partial;
  bool terminated = false;
  bool converged_early = false;
  for (int n = 0; n <= scan; ++n) {
    const Complex v = term(n);
    if (v == Complex{}) {
      terminated = true;
      break;
    }
    t.push_back(v);
    partial.add(v);
    if (!forced && n > 0 && std::abs(v) < 0.25 * kEps * std::abs(partial.value()) &&
        std::abs(v) < std::abs(t[n - 1])) {
      converged_early = true;
      break;
    }
  }

  TruncatedSum out;
  out.terminated = terminated;
  int m = static_cast<int>(t.size());  // index of first omitted term
  if (!terminated) {
    if (converged_early) {
      m = static_cast<int>(t.size()) - 1;
    } else {
      m = 0;
      for (int n = 1; n < static_cast<int>(t.size()); ++n)
        if (std::abs(t[n]) < std::abs(t[m])) m = n;
    }
  }
  out.optimal_terms = m;
  int keep = m;
  if (forced) {
    if (!terminated && !converged_early && *forced > m) throw DivergenceOnset(where, *forced, m);
    keep = std::min(*forced + 1, static_cast<int>(t.size()));
  }
  CompensatedSum s;
  for (int n = 0; n < keep; ++n) {
    s.add(t[n]);
    out.abs_sum += std::abs(t[n]);
  }
  out.sum = s.value();
  out.terms = keep;
  out.first_omitted = keep < static_cast<int>(t.size()) ? std::abs(t[keep]) : 0.0;
  return out;
}

}  // namespace cdpw::detail

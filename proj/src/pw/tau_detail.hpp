#pragma once

#include "cdpw/pw.hpp"

namespace cdpw::pw::detail {

// A request rewritten with s = +1 (post) or -1 (prior):
// a = 1 + s i gamma, z = -2 s i kr, sigma^l = 1 (post) or (-1)^l (prior).
struct Signed {
  explicit Signed(const TauRequest& req);
  double s;
  double gamma;  // |gamma| < 1e-8 snapped to 0
  int l;
  double kr;
  Complex a;
  Complex z;
  double sigma_l;

  Complex phase() const;  // sigma^l (2kr)^{s i gamma} e^{s i kr}
  Complex scale() const;  // sigma^l e^{gamma pi/2} / (2 s i kr)
};

struct LeadingTerms {
  Complex outgoing;     // e^{s i kr} e^{gamma pi/2} Gamma(1 + s i gamma)
  Complex incoming;     // e^{-s i kr} (2kr)^{s i gamma}
  Complex denominator;  // 2 s i kr
};

LeadingTerms leading_terms(Sign sign, double gamma, double kr);

}  // namespace cdpw::pw::detail

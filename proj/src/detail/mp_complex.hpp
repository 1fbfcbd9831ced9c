#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdpw/core.hpp"

namespace cdpw::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Minimal complex number over MPFR at a fixed precision.
class MpComplex {
 public:
  explicit MpComplex(mpfr_prec_t prec) {
    mpfr_init2(re_, prec);
    mpfr_init2(im_, prec);
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
  }
  ~MpComplex() {
    mpfr_clear(re_);
    mpfr_clear(im_);
  }
  MpComplex(const MpComplex&) = delete;
  MpComplex& operator=(const MpComplex&) = delete;

  mpfr_prec_t prec() const { return mpfr_get_prec(re_); }

  void set(Complex z) {
    mpfr_set_d(re_, z.real(), MPFR_RNDN);
    mpfr_set_d(im_, z.imag(), MPFR_RNDN);
  }
  void set(const MpComplex& o) {
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
  }
  void add_ui(unsigned long k) { mpfr_add_ui(re_, re_, k, MPFR_RNDN); }
  void add_si(long k) { mpfr_add_si(re_, re_, k, MPFR_RNDN); }
  void add(const MpComplex& o) {
    mpfr_add(re_, re_, o.re_, MPFR_RNDN);
    mpfr_add(im_, im_, o.im_, MPFR_RNDN);
  }
  void sub(const MpComplex& o) {
    mpfr_sub(re_, re_, o.re_, MPFR_RNDN);
    mpfr_sub(im_, im_, o.im_, MPFR_RNDN);
  }
  void neg() {
    mpfr_neg(re_, re_, MPFR_RNDN);
    mpfr_neg(im_, im_, MPFR_RNDN);
  }
  void mul_ui(unsigned long k) {
    mpfr_mul_ui(re_, re_, k, MPFR_RNDN);
    mpfr_mul_ui(im_, im_, k, MPFR_RNDN);
  }
  void div_ui(unsigned long k) {
    mpfr_div_ui(re_, re_, k, MPFR_RNDN);
    mpfr_div_ui(im_, im_, k, MPFR_RNDN);
  }
  bool is_zero() const { return mpfr_zero_p(re_) && mpfr_zero_p(im_); }

  Complex value() const {
    return {mpfr_get_d(re_, MPFR_RNDN), mpfr_get_d(im_, MPFR_RNDN)};
  }

  // log2 |z| to a few bits, valid far outside the double exponent range.
  double log2_abs() const {
    const double a = log2_part(re_);
    const double b = log2_part(im_);
    const double hi = std::max(a, b);
    if (hi == kNegInf) return kNegInf;
    const double lo = std::min(a, b);
    return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
  }

  mpfr_ptr re() { return re_; }
  mpfr_ptr im() { return im_; }
  mpfr_srcptr re() const { return re_; }
  mpfr_srcptr im() const { return im_; }

 private:
  static double log2_part(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return kNegInf;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x, MPFR_RNDN);
    return std::log2(std::abs(m)) + static_cast<double>(e);
  }

  mpfr_t re_, im_;
};

// Scratch registers for complex products, quotients and exponentials.
class MpScratch {
 public:
  explicit MpScratch(mpfr_prec_t prec) {
    for (auto& t : t_) mpfr_init2(t, prec);
  }
  ~MpScratch() {
    for (auto& t : t_) mpfr_clear(t);
  }
  MpScratch(const MpScratch&) = delete;
  MpScratch& operator=(const MpScratch&) = delete;

  // x <- x * y
  void mul(MpComplex& x, const MpComplex& y) {
    mpfr_mul(t_[0], x.re(), y.re(), MPFR_RNDN);
    mpfr_mul(t_[1], x.im(), y.im(), MPFR_RNDN);
    mpfr_mul(t_[2], x.re(), y.im(), MPFR_RNDN);
    mpfr_mul(t_[3], x.im(), y.re(), MPFR_RNDN);
    mpfr_sub(x.re(), t_[0], t_[1], MPFR_RNDN);
    mpfr_add(x.im(), t_[2], t_[3], MPFR_RNDN);
  }

  // x <- x / y
  void div(MpComplex& x, const MpComplex& y) {
    mpfr_sqr(t_[0], y.re(), MPFR_RNDN);
    mpfr_sqr(t_[1], y.im(), MPFR_RNDN);
    mpfr_add(t_[4], t_[0], t_[1], MPFR_RNDN);  // |y|^2
    mpfr_mul(t_[0], x.re(), y.re(), MPFR_RNDN);
    mpfr_mul(t_[1], x.im(), y.im(), MPFR_RNDN);
    mpfr_mul(t_[2], x.im(), y.re(), MPFR_RNDN);
    mpfr_mul(t_[3], x.re(), y.im(), MPFR_RNDN);
    mpfr_add(t_[0], t_[0], t_[1], MPFR_RNDN);
    mpfr_sub(t_[2], t_[2], t_[3], MPFR_RNDN);
    mpfr_div(x.re(), t_[0], t_[4], MPFR_RNDN);
    mpfr_div(x.im(), t_[2], t_[4], MPFR_RNDN);
  }

  // x <- e^z
  void exp(MpComplex& x, const MpComplex& z) {
    mpfr_exp(t_[0], z.re(), MPFR_RNDN);
    mpfr_sin_cos(t_[1], t_[2], z.im(), MPFR_RNDN);
    mpfr_mul(x.re(), t_[0], t_[2], MPFR_RNDN);
    mpfr_mul(x.im(), t_[0], t_[1], MPFR_RNDN);
  }

 private:
  mpfr_t t_[5];
};

}  // namespace cdpw::detail

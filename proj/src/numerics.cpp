#include "frob/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <utility>

#include "frob/error.hpp"

namespace frob {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;
constexpr double kLog10Of2 = 0.30102999566398119521;

Bits widest(const ArbReal& a, const ArbReal& b) { return std::max(a.precision(), b.precision()); }

void raise_precision(ArbReal& target, Bits bits) {
  if (target.precision() < bits) mpfr_prec_round(target.get(), bits, MPFR_RNDN);
}

}  // namespace

ArbReal::ArbReal(Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

ArbReal::ArbReal(long value, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

ArbReal::ArbReal(const Rational& value, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

ArbReal::ArbReal(double value, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

ArbReal::ArbReal(const ArbReal& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

ArbReal::ArbReal(ArbReal&& other) noexcept {
  // Leave `other` as a valid minimal-precision zero.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

ArbReal& ArbReal::operator=(const ArbReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

ArbReal& ArbReal::operator=(ArbReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

ArbReal::~ArbReal() { mpfr_clear(v_); }

ArbReal ArbReal::parse(std::string_view text, Bits bits) {
  static const std::regex kFormat(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
  const std::string s(text);
  if (!std::regex_match(s, kFormat)) throw ParseError("malformed decimal '" + s + "'");
  ArbReal out(bits);
  mpfr_clear_flags();
  char* end = nullptr;
  mpfr_strtofr(out.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == nullptr || *end != '\0') throw ParseError("malformed decimal '" + s + "'");
  if (mpfr_overflow_p() || mpfr_inf_p(out.v_)) {
    throw ParseError("decimal '" + s + "' overflows the working range");
  }
  if (mpfr_underflow_p()) throw ParseError("decimal '" + s + "' underflows the working range");
  return out;
}

ArbReal ArbReal::with_precision(Bits bits) const {
  ArbReal out(bits);
  mpfr_set(out.v_, v_, MPFR_RNDN);
  return out;
}

double ArbReal::log10_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  if (!is_finite()) return std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, v_, MPFR_RNDN);
  return std::log10(std::fabs(mantissa)) + static_cast<double>(exponent) * kLog10Of2;
}

std::string ArbReal::to_string(int digits) const {
  digits = std::max(digits, 1);
  if (is_zero()) return "0";
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<std::size_t>(digits), v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string out;
  if (!mant.empty() && mant.front() == '-') {
    out.push_back('-');
    mant.erase(mant.begin());
  }
  out.push_back(mant.front());
  if (mant.size() > 1) {
    out.push_back('.');
    out.append(mant, 1, std::string::npos);
  }
  out += "e" + std::to_string(static_cast<long>(exponent) - 1);
  return out;
}

std::string ArbReal::to_string_roundtrip() const {
  return to_string(static_cast<int>(std::ceil(static_cast<double>(precision()) * kLog10Of2)) + 2);
}

ArbReal ArbReal::operator-() const {
  ArbReal out(precision());
  mpfr_neg(out.v_, v_, MPFR_RNDN);
  return out;
}

ArbReal& ArbReal::operator+=(const ArbReal& o) {
  raise_precision(*this, o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator-=(const ArbReal& o) {
  raise_precision(*this, o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator*=(const ArbReal& o) {
  raise_precision(*this, o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator/=(const ArbReal& o) {
  raise_precision(*this, o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator+=(long o) {
  mpfr_add_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

ArbReal& ArbReal::operator/=(long o) {
  mpfr_div_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

ArbReal operator+(const ArbReal& a, const ArbReal& b) {
  ArbReal out(widest(a, b));
  mpfr_add(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

ArbReal operator-(const ArbReal& a, const ArbReal& b) {
  ArbReal out(widest(a, b));
  mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

ArbReal operator*(const ArbReal& a, const ArbReal& b) {
  ArbReal out(widest(a, b));
  mpfr_mul(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

ArbReal operator/(const ArbReal& a, const ArbReal& b) {
  ArbReal out(widest(a, b));
  mpfr_div(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

ArbReal abs(const ArbReal& x) {
  ArbReal out(x.precision());
  mpfr_abs(out.get(), x.get(), MPFR_RNDN);
  return out;
}

ArbReal sqrt(const ArbReal& x) {
  ArbReal out(x.precision());
  mpfr_sqrt(out.get(), x.get(), MPFR_RNDN);
  return out;
}

ArbReal log(const ArbReal& x) {
  ArbReal out(x.precision());
  mpfr_log(out.get(), x.get(), MPFR_RNDN);
  return out;
}

ArbReal exp(const ArbReal& x) {
  ArbReal out(x.precision());
  mpfr_exp(out.get(), x.get(), MPFR_RNDN);
  return out;
}

ArbReal hypot(const ArbReal& x, const ArbReal& y) {
  ArbReal out(widest(x, y));
  mpfr_hypot(out.get(), x.get(), y.get(), MPFR_RNDN);
  return out;
}

ArbReal atan2(const ArbReal& y, const ArbReal& x) {
  ArbReal out(widest(x, y));
  mpfr_atan2(out.get(), y.get(), x.get(), MPFR_RNDN);
  return out;
}

ArbReal pi(Bits bits) {
  ArbReal out(bits);
  mpfr_const_pi(out.get(), MPFR_RNDN);
  return out;
}

ArbReal pow10(long e, Bits bits) {
  ArbReal out(bits);
  ArbReal ten(10L, bits);
  mpfr_pow_si(out.get(), ten.get(), e, MPFR_RNDN);
  return out;
}

Rational to_rational(const ArbReal& x) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

// ---------------------------------------------------------------------------

ArbComplex::ArbComplex(const ArbReal& re) : re_(re), im_(re.precision()) {}

ArbComplex::ArbComplex(const ArbReal& re, const ArbReal& im) : re_(re), im_(im) {
  const Bits bits = widest(re, im);
  raise_precision(re_, bits);
  raise_precision(im_, bits);
}

ArbComplex ArbComplex::parse(std::string_view text, Bits bits) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return ArbComplex(ArbReal::parse(text, bits));
  return {ArbReal::parse(text.substr(0, comma), bits), ArbReal::parse(text.substr(comma + 1), bits)};
}

ArbComplex ArbComplex::with_precision(Bits bits) const {
  return {re_.with_precision(bits), im_.with_precision(bits)};
}

double ArbComplex::log10_abs() const {
  if (im_.is_zero()) return re_.log10_abs();
  if (re_.is_zero()) return im_.log10_abs();
  return abs().log10_abs();
}

ArbComplex& ArbComplex::operator+=(const ArbComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ArbComplex& ArbComplex::operator-=(const ArbComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ArbComplex& ArbComplex::operator*=(const ArbComplex& o) {
  if (im_.is_zero() && o.im_.is_zero()) {
    re_ *= o.re_;
    raise_precision(im_, re_.precision());
    return *this;
  }
  ArbReal re = re_ * o.re_ - im_ * o.im_;
  ArbReal im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ArbComplex& ArbComplex::operator/=(const ArbComplex& o) {
  if (o.im_.is_zero()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const ArbReal n = o.norm();
  ArbReal re = (re_ * o.re_ + im_ * o.im_) / n;
  ArbReal im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ArbComplex& ArbComplex::operator*=(const ArbReal& o) {
  re_ *= o;
  im_ *= o;
  return *this;
}

ArbComplex& ArbComplex::operator+=(long o) {
  re_ += o;
  return *this;
}

ArbComplex& ArbComplex::operator-=(long o) {
  re_ -= o;
  return *this;
}

ArbComplex& ArbComplex::operator*=(long o) {
  re_ *= o;
  im_ *= o;
  return *this;
}

ArbComplex& ArbComplex::operator/=(long o) {
  re_ /= o;
  im_ /= o;
  return *this;
}

std::string ArbComplex::to_string(int digits) const {
  if (im_.is_zero()) return re_.to_string(digits);
  return re_.to_string(digits) + "," + im_.to_string(digits);
}

ArbComplex log(const ArbComplex& z) {
  ArbReal arg = atan2(z.im(), z.re());
  if (z.im().is_zero() && z.re().sign() < 0) {
    // mpfr_atan2 returns -pi for a negative zero imaginary part; pin the upper edge.
    arg = pi(z.precision());
  }
  return {log(z.abs()), arg};
}

ArbComplex exp(const ArbComplex& z) {
  const ArbReal mod = exp(z.re());
  if (z.im().is_zero()) return ArbComplex(mod);
  ArbReal s(z.precision());
  ArbReal c(z.precision());
  mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
  return {mod * c, mod * s};
}

ArbComplex sqrt(const ArbComplex& z) {
  if (z.im().is_zero() && z.re().sign() >= 0) return ArbComplex(sqrt(z.re()));
  const ArbReal r = z.abs();
  ArbReal x = sqrt((r + z.re()) / 2L);
  ArbReal y = sqrt((r - z.re()) / 2L);
  if (z.im().sign() < 0) y = -y;
  return {x, y};
}

ArbComplex pow(const ArbComplex& z, const ArbComplex& w) {
  if (w.is_zero()) return ArbComplex(1L, z.precision());
  if (z.is_zero()) return ArbComplex(z.precision());
  return exp(w * log(z));
}

// ---------------------------------------------------------------------------

Bits bits_for_digits(double digits) {
  return static_cast<Bits>(std::ceil(std::max(digits, 1.0) * kLog2Of10));
}

PrecisionPolicy plan_precision(int target_digits, double max_term_log10) {
  if (target_digits < 1) throw InvalidInput("target precision must be at least 1 digit");
  if (!std::isfinite(max_term_log10)) throw InvalidInput("max_term_log10 must be finite");
  PrecisionPolicy policy;
  policy.target_digits = target_digits;
  policy.guard_digits = std::max(0, static_cast<int>(std::ceil(max_term_log10))) + kGuardMargin;
  policy.working_bits = bits_for_digits(static_cast<double>(target_digits + policy.guard_digits));
  return policy;
}

}  // namespace frob

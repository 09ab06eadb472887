#include "frob/rational.hpp"

#include <cctype>
#include <regex>

#include "frob/error.hpp"

namespace frob {

namespace {

// Decimal exponents beyond this are rejected rather than expanded exactly.
constexpr long kMaxDecimalExponent = 100000;

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational out = e < 0 ? Rational(mpz_class(1), p) : Rational(p);
  out.canonicalize();
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  static const std::regex kFraction(R"(^([+-]?\d+)\s*/\s*(\d+)$)");
  static const std::regex kDecimal(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, kFraction)) {
    std::string n = m[1].str();
    if (n[0] == '+') n.erase(0, 1);
    mpz_class num(n, 10);
    mpz_class den(m[2].str(), 10);
    if (den == 0) throw ParseError("zero denominator in rational '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(s, m, kDecimal)) {
    const std::string whole = m[2].str();
    const std::string frac = m[3].matched ? m[3].str() : std::string();
    if (whole.empty() && frac.empty()) throw ParseError("malformed number '" + s + "'");
    long exponent = 0;
    if (m[4].matched) {
      const std::string ex = m[4].str();
      if (ex.size() > 7) throw ParseError("exponent out of range in '" + s + "'");
      exponent = std::stol(ex);
    }
    exponent -= static_cast<long>(frac.size());
    if (exponent > kMaxDecimalExponent || exponent < -kMaxDecimalExponent) {
      throw ParseError("exponent out of range in '" + s + "'");
    }
    mpz_class digits((whole.empty() ? std::string("0") : whole) + frac, 10);
    Rational q(digits);
    q *= pow10(exponent);
    if (m[1].str() == "-") q = -q;
    q.canonicalize();
    return q;
  }
  throw ParseError("cannot parse rational '" + s + "'");
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

bool QComplex::is_integer() const { return is_real() && re_.get_den() == 1; }

QComplex& QComplex::operator+=(const QComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

QComplex& QComplex::operator-=(const QComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

QComplex& QComplex::operator*=(const QComplex& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

QComplex& QComplex::operator/=(const QComplex& o) {
  if (o.is_zero()) throw std::domain_error("QComplex division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const Rational n = o.norm();
  Rational re = (re_ * o.re_ + im_ * o.im_) / n;
  Rational im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

QComplex QComplex::parse(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return QComplex(parse_rational(text));
  return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

std::string to_string(const QComplex& z) {
  if (z.is_real()) return z.re().get_str();
  return z.re().get_str() + "," + z.im().get_str();
}

std::ostream& operator<<(std::ostream& os, const QComplex& z) { return os << to_string(z); }

std::optional<QComplex> exact_sqrt(const QComplex& z) {
  if (z.is_real()) {
    if (sgn(z.re()) >= 0) {
      auto r = exact_sqrt(z.re());
      if (!r) return std::nullopt;
      return QComplex(*r);
    }
    auto r = exact_sqrt(Rational(-z.re()));
    if (!r) return std::nullopt;
    return QComplex(Rational(0), *r);
  }
  // sqrt(a + bi) = x + yi with x^2 = (|z| + a)/2, y = b/(2x).
  auto modulus = exact_sqrt(z.norm());
  if (!modulus) return std::nullopt;
  Rational half = (*modulus + z.re()) / 2;
  auto x = exact_sqrt(half);
  if (!x || sgn(*x) == 0) return std::nullopt;
  Rational y = z.im() / (2 * *x);
  return QComplex(*x, y);
}

}  // namespace frob

#include "oncs/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace oncs {
namespace {

using Wide = __int128;
using UWide = unsigned __int128;

UWide umag(Wide v) { return v < 0 ? UWide(0) - UWide(v) : UWide(v); }

UWide gcd_u(UWide a, UWide b) {
  while (b != 0) {
    const UWide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t checked_narrow(Wide v) {
  if (v > Wide(std::numeric_limits<std::int64_t>::max()) ||
      v < Wide(std::numeric_limits<std::int64_t>::min())) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Normalizes num/den (den != 0) to lowest terms with den > 0 and narrows.
Rational make(Wide num, Wide den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  const Wide g = Wide(gcd_u(umag(num), umag(den)));
  return Rational(checked_narrow(num / g), checked_narrow(den / g));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (num == 0) return;  // member initializers already hold 0/1
  Wide n = num;
  Wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const Wide g = Wide(gcd_u(umag(n), umag(d)));
  num_ = checked_narrow(n / g);
  den_ = checked_narrow(d / g);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  const Wide lhs = Wide(num_) * o.den_;
  const Wide rhs = Wide(o.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

// Parses a run of decimal digits into an unsigned wide value, bounding the
// result so the later narrowing cannot wrap.
UWide parse_digits(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
    throw std::invalid_argument("expected digits in rational literal");
  }
  UWide value = 0;
  const UWide cap = UWide(std::numeric_limits<std::int64_t>::max());
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + UWide(text[pos] - '0');
    if (value > cap) throw std::overflow_error("rational literal out of range");
    ++pos;
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  Wide num = Wide(parse_digits(text, pos));
  Wide den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = Wide(parse_digits(text, pos));
    if (den == 0) throw std::domain_error("rational with zero denominator");
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    const UWide frac = parse_digits(text, pos);
    const std::size_t places = pos - start;
    if (places > 18) throw std::overflow_error("rational literal out of range");
    for (std::size_t i = 0; i < places; ++i) den *= 10;
    num = num * den + Wide(frac);  // "12.34" -> 1234 / 100, exactly
  }
  if (pos != text.size()) throw std::invalid_argument("trailing characters in rational literal");
  if (negative) num = -num;
  return make(num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal_str(int places) const {
  if (places < 0 || places > 18) throw std::invalid_argument("decimal places must be in [0, 18]");
  UWide scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const UWide scaled = umag(num_) * scale;
  UWide q = scaled / UWide(den_);
  const UWide r = scaled % UWide(den_);
  if (2 * r >= UWide(den_)) ++q;  // round half away from zero
  std::string digits;
  if (q == 0) digits = "0";
  while (q != 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + int(q % 10)));
    q /= 10;
  }
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, std::string(places + 1 - digits.size(), '0'));
  }
  std::string out;
  if (num_ < 0 && digits.find_first_not_of('0') != std::string::npos) out = "-";
  if (places == 0) return out + digits;
  out += digits.substr(0, digits.size() - places);
  out += ".";
  out += digits.substr(digits.size() - places);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace oncs

#include "cab/crat.hpp"

#include <ostream>

#include "cab/error.hpp"

namespace cab {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty rational literal");
  s = s.substr(b, e - b + 1);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed rational literal '" + std::string(text) + "'");
  if (sgn(q.get_den()) == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

CRat& CRat::operator+=(const CRat& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

CRat& CRat::operator-=(const CRat& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

CRat& CRat::operator*=(const CRat& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

CRat& CRat::operator/=(const CRat& o) {
  Rational n = o.norm2();
  if (sgn(n) == 0) throw DomainError("division by zero");
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string to_string(const CRat& z) {
  if (z.is_real()) return z.re().get_str();
  if (sgn(z.re()) == 0) return z.im().get_str() + "i";
  std::string im = z.im().get_str();
  if (im.front() != '-') im = "+" + im;
  return "(" + z.re().get_str() + im + "i)";
}

std::ostream& operator<<(std::ostream& os, const CRat& z) { return os << to_string(z); }

}  // namespace cab

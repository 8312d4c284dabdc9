#include "flowdisc/rational.hpp"

#include <cctype>

#include "flowdisc/errors.hpp"

namespace flowdisc {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t pos = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (pos == s.size()) return false;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string owned(s);
  if (!owned.empty() && owned[0] == '+') owned.erase(0, 1);
  return mpz_class(owned, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_integer_literal(num_text)) {
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class den = 1;
  if (slash != std::string_view::npos) {
    const auto den_text = text.substr(slash + 1);
    if (!is_integer_literal(den_text) || den_text[0] == '-' || den_text[0] == '+') {
      throw ValidationError("malformed rational '" + std::string(text) + "'");
    }
    den = parse_integer(den_text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  }
  Rational q(parse_integer(num_text), den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow2(int e) {
  mpz_class p = 1;
  const unsigned long shift = static_cast<unsigned long>(e >= 0 ? e : -e);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), shift);
  if (e >= 0) return Rational(p);
  return Rational(mpz_class(1), p);
}

int ceil_log2(const Rational& q) {
  if (sgn(q) <= 0) throw ValidationError("ceil_log2 of non-positive value " + to_string(q));
  // Start from a floating estimate and correct exactly.
  int k = static_cast<int>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) -
          static_cast<int>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
  while (q > pow2(k)) ++k;
  while (q <= pow2(k - 1)) --k;
  return k;
}

bool is_dyadic_multiple(const Rational& q, int level) {
  Rational scaled = q * pow2(level);
  return scaled.get_den() == 1;
}

Rational floor_to_dyadic(const Rational& q, int level) {
  Rational scaled = q * pow2(level);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return Rational(fl) / pow2(level);
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

mpz_class lcm_of_denominators(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace flowdisc

#include "suploc/rational.hpp"

#include <cctype>

namespace suploc {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw SchemaError("not a rational literal: '" + std::string(text) + "'");
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' ||
        den[0] == '+')
      fail();
    mpz_class n(std::string(strip_plus(num)), 10), d(std::string(strip_plus(den)), 10);
    if (d == 0) fail();
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    std::string_view digits = whole;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+'))
      digits.remove_prefix(1);
    if (digits.empty() && frac.empty()) fail();
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    mpz_class n(std::string(digits.empty() ? "0" : digits) + std::string(frac), 10);
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    Rational q(neg ? mpz_class(-n) : n, d);
    q.canonicalize();
    return q;
  }
  if (!is_integer_literal(text)) fail();
  return Rational(mpz_class(std::string(strip_plus(text)), 10));
}

std::string to_string(const Rational &q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

Rational pow2(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(p);
  Rational q(mpz_class(1), p);
  q.canonicalize();
  return q;
}

}  // namespace suploc

#include "stlsat/rational.hpp"

#include <cctype>

namespace stlsat {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '-' || text[i] == '+') {
    neg = text[i] == '-';
    ++i;
  }
  std::string intpart, fracpart, denpart;
  auto digits = [&](std::string& out) {
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
  };
  digits(intpart);
  if (intpart.empty()) return std::nullopt;
  if (i < text.size() && text[i] == '.') {
    ++i;
    digits(fracpart);
    if (fracpart.empty()) return std::nullopt;
  } else if (i < text.size() && text[i] == '/') {
    ++i;
    digits(denpart);
    if (denpart.empty()) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;

  Rational value;
  if (!denpart.empty()) {
    mpz_class den(denpart);
    if (den == 0) return std::nullopt;
    value = Rational(mpz_class(intpart), den);
  } else if (!fracpart.empty()) {
    mpz_class scale = 1;
    for (std::size_t k = 0; k < fracpart.size(); ++k) scale *= 10;
    value = Rational(mpz_class(intpart) * scale + mpz_class(fracpart), scale);
  } else {
    value = Rational(mpz_class(intpart));
  }
  value.canonicalize();
  if (neg) value = -value;
  return value;
}

std::string format_rational(const Rational& q) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (den == 1) return num.get_str();

  // A rational has a finite decimal expansion iff den = 2^a * 5^b.
  mpz_class d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.get_str() + "/" + den.get_str();

  int places = std::max(twos, fives);
  mpz_class scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  mpz_class scaled = num * scale / den;  // exact by construction
  bool neg = scaled < 0;
  std::string body = mpz_class(abs(scaled)).get_str();
  if (static_cast<int>(body.size()) <= places) body.insert(0, places + 1 - body.size(), '0');
  body.insert(body.size() - places, ".");
  return (neg ? "-" : "") + body;
}

}  // namespace stlsat

#include "pumpwise/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>

#include "pumpwise/error.hpp"

namespace pumpwise {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorKind::Parse, "not a number: '" + std::string(text) + "'");
}

std::int64_t pow10(int k, std::string_view text) {
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) {
    if (p > kMax / 10) bad(text);
    p *= 10;
  }
  return p;
}

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t mantissa = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      any_digit = true;
      // Trailing fractional zeros add nothing; skip them to stay in range.
      if (seen_point && c == '0') {
        std::size_t j = i;
        while (j < text.size() && text[j] == '0') ++j;
        if (j == text.size() || text[j] == 'e' || text[j] == 'E') {
          i = j - 1;
          continue;
        }
      }
      if (mantissa > (kMax - (c - '0')) / 10) bad(text);
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad(text);
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') bad(text);
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i == text.size()) bad(text);
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad(text);
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 18) bad(text);
    }
    if (exp_negative) exponent = -exponent;
  }
  int shift = exponent - frac_digits;
  Rational value;
  if (shift >= 0) {
    std::int64_t p = pow10(shift, text);
    if (mantissa != 0 && mantissa > kMax / p) bad(text);
    value = Rational(mantissa * p);
  } else {
    value = Rational(mantissa, pow10(-shift, text));
  }
  return negative ? -value : value;
}

}  // namespace

std::int64_t floor_div(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil_div(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) bad(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den.numerator() == 0) bad(text);
  return num / den;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  std::int64_t den = r.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1 || std::max(twos, fives) > 15) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }
  return format_fixed(r, std::max(twos, fives));
}

std::string format_fixed(const Rational& r, int decimals) {
  __int128 scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  __int128 num = static_cast<__int128>(r.numerator()) * scale;
  __int128 den = r.denominator();
  bool negative = num < 0;
  if (negative) num = -num;
  __int128 q = (2 * num + den) / (2 * den);
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(q % 10)));
    q /= 10;
  } while (q != 0);
  while (static_cast<int>(digits.size()) <= decimals) digits.insert(digits.begin(), '0');
  if (decimals > 0) digits.insert(digits.end() - decimals, '.');
  if (negative && digits.find_first_not_of("0.") != std::string::npos) {
    digits.insert(digits.begin(), '-');
  }
  return digits;
}

}  // namespace pumpwise

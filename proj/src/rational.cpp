#include "sheafctx/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sheafctx {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const auto num = body.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  if (std::all_of(den.begin(), den.end(), [](char c) { return c == '0'; }))
    throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational value{std::string(text)};
  return value;
}

std::string to_string(const Rational& value) { return value.str(); }

}  // namespace sheafctx

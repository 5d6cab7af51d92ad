#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace sheafctx {

/// Exact arbitrary-precision rational. Expression templates are disabled so
/// that `auto` behaves like a value everywhere.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "p", "-p" or "p/q" (q != 0). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& value);

}  // namespace sheafctx

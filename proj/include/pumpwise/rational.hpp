#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace pumpwise {

/// Exact rational used for clocks, delays and throughputs.
using Rational = boost::rational<std::int64_t>;

std::int64_t floor_div(const Rational& r);
std::int64_t ceil_div(const Rational& r);
double to_double(const Rational& r);

/// Parses "165", "27.5", "1e3", "-0.25" or "1000/3" exactly.
/// Throws Error(Parse) on anything else.
Rational parse_rational(std::string_view text);

/// Shortest exact text: "165", "27.5", or "1000/3" when the value has no
/// finite decimal expansion.
std::string to_string(const Rational& r);

/// Fixed-point rendering, rounded half away from zero.
std::string format_fixed(const Rational& r, int decimals);

}  // namespace pumpwise

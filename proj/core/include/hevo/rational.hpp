#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hevo {

// Exact scores and aggregates. Denominators stay small (products of criterion
// counts, time budgets and task counts), so 64-bit components suffice.
using Rational = boost::rational<std::int64_t>;

// "n/d" in lowest terms, "n" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "n/d", an integer, or a plain decimal such as "0.9" (parsed exactly).
Rational parse_rational(std::string_view text);

// Decimal rendering with exactly six fractional digits, rounded half away from zero.
std::string to_fixed6(const Rational& r);

}  // namespace hevo

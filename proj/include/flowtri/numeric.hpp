#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace flowtri {

// All arithmetic in this library is exact. Int is an arbitrary-precision
// integer, Rat an arbitrary-precision rational kept in lowest terms.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;
using IntMat = std::vector<std::vector<Int>>;
using RatMat = std::vector<std::vector<Rat>>;

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

/// Formats a rational as "p" or "p/q" (q > 1), the wire format used in JSON.
std::string rat_to_string(const Rat& r);

/// Parses "p" or "p/q". Throws InvalidInputError on malformed input or q == 0.
Rat rat_from_string(const std::string& s);

}  // namespace flowtri

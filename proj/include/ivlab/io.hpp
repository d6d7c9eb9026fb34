#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ivlab {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// Parses doubles such as "1e6", "-inf"; throws std::invalid_argument on trailing junk.
double parse_number(std::string_view s);

/// Comma-separated list of numbers, or lo:step:hi (inclusive, rounded to the step).
std::vector<double> parse_grid(std::string_view s);

/// Sorts and removes exact duplicates.
std::vector<double> sorted_unique(std::vector<double> v);

/// Evenly spaced lo..hi with `count` points (count >= 2).
std::vector<double> linspace(double lo, double hi, int count);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

} // namespace ivlab

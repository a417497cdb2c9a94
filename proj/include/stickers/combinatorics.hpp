// Exact binomial coefficients over arbitrary-size integers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stickers/numeric.hpp"

namespace stickers {

// Row r of Pascal's triangle, C(r, 0..r), via the multiplicative recurrence
// C(r,j) = C(r,j-1) * (r-j+1) / j. Each division is exact.
inline std::vector<Integer> binomial_row(int r) {
  if (r < 0) throw std::invalid_argument("binomial row index must be non-negative");
  std::vector<Integer> row(static_cast<std::size_t>(r) + 1);
  row[0] = 1;
  for (int j = 1; j <= r; ++j)
    row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] * (r - j + 1) / j;
  return row;
}

inline Integer binomial(int r, int j) {
  if (r < 0) throw std::invalid_argument("binomial upper index must be non-negative");
  if (j < 0 || j > r) return 0;
  if (j > r - j) j = r - j;
  Integer c = 1;
  for (int t = 1; t <= j; ++t) c = c * (r - t + 1) / t;
  return c;
}

// base^e for rational base and non-negative exponent, by squaring.
inline Rational rational_pow(Rational base, std::int64_t e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  Rational result = 1;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

}  // namespace stickers

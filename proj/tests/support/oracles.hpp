#pragma once

// Reference computations written independently of the library code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace pirogue::oracle {

/// Great-circle distance from the chord between unit vectors: 2R asin(|p - q| / 2).
inline double chord_distance_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double r = 6371.0;
  const double d2r = std::numbers::pi / 180.0;
  const auto unit = [&](double lat, double lon) {
    return std::array<double, 3>{std::cos(lat * d2r) * std::cos(lon * d2r), std::cos(lat * d2r) * std::sin(lon * d2r),
                                 std::sin(lat * d2r)};
  };
  const auto p = unit(lat1, lon1);
  const auto q = unit(lat2, lon2);
  const double chord = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]));
  return 2.0 * r * std::asin(chord / 2.0);
}

/// Ishigami f(x) = sin x1 + a sin^2 x2 + b x3^4 sin x1 on [-pi, pi]^3.
inline double ishigami(double x1, double x2, double x3, double a = 7.0, double b = 0.1) {
  return std::sin(x1) + a * std::sin(x2) * std::sin(x2) + b * std::pow(x3, 4) * std::sin(x1);
}

struct IshigamiIndices {
  double s1[3];
  double st[3];
};

/// Closed-form variance decomposition of the Ishigami function.
inline IshigamiIndices ishigami_indices(double a = 7.0, double b = 0.1) {
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double pi8 = pi4 * pi4;
  const double v1 = 0.5 * (1.0 + b * pi4 / 5.0) * (1.0 + b * pi4 / 5.0);
  const double v2 = a * a / 8.0;
  const double v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
  const double v = v1 + v2 + v13;
  return {{v1 / v, v2 / v, 0.0}, {(v1 + v13) / v, v2 / v, v13 / v}};
}

/// Polynomial product modulo p over GF(2); polynomials as bit masks (bit i = x^i).
inline std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p, unsigned degree) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a >> degree & 1u) a ^= p;
  }
  return r;
}

inline std::uint64_t gf2_powmod(std::uint64_t base, std::uint64_t e, std::uint64_t p, unsigned degree) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1u) r = gf2_mulmod(r, base, p, degree);
    base = gf2_mulmod(base, base, p, degree);
    e >>= 1;
  }
  return r;
}

/// x generates the multiplicative group of GF(2)[x]/p, i.e. p is primitive.
inline bool gf2_primitive(std::uint64_t p, unsigned degree) {
  if (degree == 1) return p == 0b11;
  const std::uint64_t order = (std::uint64_t{1} << degree) - 1;
  if (gf2_powmod(0b10, order, p, degree) != 1) return false;
  std::uint64_t n = order;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    while (n % q == 0) n /= q;
    if (gf2_powmod(0b10, order / q, p, degree) == 1) return false;
  }
  if (n > 1 && n != order && gf2_powmod(0b10, order / n, p, degree) == 1) return false;
  return true;
}

/// Kolmogorov-Smirnov statistic of a sample against U(0, 1).
inline double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
  return d;
}

}  // namespace pirogue::oracle

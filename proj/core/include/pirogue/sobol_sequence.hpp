#pragma once

#include <cstdint>
#include <vector>

namespace pirogue {

/**
 * Sobol low-discrepancy sequence (Gray-code construction, Joe-Kuo direction
 * numbers) with an optional random digital shift per dimension.
 */
class SobolSequence {
 public:
  static constexpr unsigned kMaxDimensions = 32;
  static constexpr unsigned kBits = 32;

  /// `shift_seed` 0 disables shifting.
  SobolSequence(unsigned dimensions, std::uint64_t shift_seed = 0);

  unsigned dimensions() const { return dims_; }
  /// Next point in [0, 1)^d. The first call returns point index 1 (the all-zero point is skipped).
  std::vector<double> next();

  /// Primitive-polynomial data backing dimension `dim` (>= 1): degree s, coefficients a, initial m.
  struct Polynomial {
    unsigned degree;
    unsigned coeffs;
    std::vector<std::uint32_t> m;
  };
  static Polynomial polynomial(unsigned dim);

 private:
  unsigned dims_;
  std::uint64_t index_ = 0;
  std::vector<std::vector<std::uint32_t>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
};

}  // namespace pirogue

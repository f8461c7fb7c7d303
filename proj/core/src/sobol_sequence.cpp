#include "pirogue/sobol_sequence.hpp"

#include <array>

#include "pirogue/errors.hpp"
#include "pirogue/rng.hpp"

namespace pirogue {

namespace {

struct Entry {
  unsigned degree;
  unsigned coeffs;
  std::array<std::uint32_t, 7> m;
};

// Joe & Kuo (2008) primitive polynomials and initial direction numbers, dimensions 2..32.
constexpr Entry kTable[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 3, 5, 9, 1, 25, 53}},
    {7, 14, {1, 3, 1, 13, 9, 35, 107}},
    {7, 19, {1, 3, 1, 5, 27, 61, 31}},
    {7, 21, {1, 1, 5, 11, 19, 41, 61}},
    {7, 28, {1, 3, 5, 3, 3, 13, 69}},
    {7, 31, {1, 1, 7, 13, 1, 19, 1}},
    {7, 32, {1, 3, 7, 5, 13, 19, 59}},
    {7, 37, {1, 1, 3, 9, 25, 29, 41}},
    {7, 41, {1, 3, 5, 13, 23, 1, 55}},
    {7, 42, {1, 3, 7, 3, 13, 59, 17}},
};

}  // namespace

SobolSequence::Polynomial SobolSequence::polynomial(unsigned dim) {
  if (dim < 2 || dim > kMaxDimensions) throw ValidationError("Sobol dimension out of range");
  const Entry& e = kTable[dim - 2];
  return {e.degree, e.coeffs, std::vector<std::uint32_t>(e.m.begin(), e.m.begin() + e.degree)};
}

SobolSequence::SobolSequence(unsigned dimensions, std::uint64_t shift_seed)
    : dims_(dimensions), state_(dimensions, 0), shift_(dimensions, 0) {
  if (dimensions < 1 || dimensions > kMaxDimensions)
    throw ValidationError("Sobol sequence supports 1.." + std::to_string(kMaxDimensions) + " dimensions");
  directions_.assign(dimensions, std::vector<std::uint32_t>(kBits + 1, 0));
  for (unsigned k = 1; k <= kBits; ++k) directions_[0][k] = 1u << (kBits - k);
  for (unsigned d = 1; d < dimensions; ++d) {
    const auto p = polynomial(d + 1);
    auto& v = directions_[d];
    const unsigned s = p.degree;
    for (unsigned k = 1; k <= kBits && k <= s; ++k) v[k] = p.m[k - 1] << (kBits - k);
    for (unsigned k = s + 1; k <= kBits; ++k) {
      v[k] = v[k - s] ^ (v[k - s] >> s);
      for (unsigned i = 1; i < s; ++i)
        if ((p.coeffs >> (s - 1 - i)) & 1u) v[k] ^= v[k - i];
    }
  }
  if (shift_seed != 0) {
    Rng rng(shift_seed);
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng.next_u64() >> 32);
  }
}

std::vector<double> SobolSequence::next() {
  // Gray-code update: flip the direction number of the lowest zero bit of the previous index.
  unsigned c = 1;
  for (std::uint64_t i = index_; i & 1u; i >>= 1) ++c;
  if (c > kBits) throw ValidationError("Sobol sequence exhausted");
  ++index_;
  std::vector<double> x(dims_);
  for (unsigned d = 0; d < dims_; ++d) {
    state_[d] ^= directions_[d][c];
    x[d] = static_cast<double>(state_[d] ^ shift_[d]) * 0x1.0p-32;
  }
  return x;
}

}  // namespace pirogue

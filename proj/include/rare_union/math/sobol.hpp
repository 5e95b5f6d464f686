#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rare_union::math {

/// Sobol' points in up to 8 dimensions (Joe–Kuo direction numbers), 32-bit
/// resolution, generated in Gray-code order. A digital shift (XOR with a fixed
/// 32-bit word per coordinate) randomizes the net while keeping its
/// stratification.
class SobolSequence {
public:
  static constexpr std::size_t kMaxDim = 8;
  static constexpr int kBits = 32;

  explicit SobolSequence(std::size_t dim, std::vector<std::uint32_t> shift = {})
      : dim_(dim), shift_(std::move(shift)), state_(dim, 0) {
    if (dim == 0 || dim > kMaxDim) throw std::invalid_argument("SobolSequence: 1 <= dim <= 8");
    if (shift_.empty()) shift_.assign(dim, 0);
    if (shift_.size() != dim) throw std::invalid_argument("SobolSequence: shift size");
    init_directions();
  }

  std::size_t dim() const noexcept { return dim_; }

  /// Writes the next point (in (0,1)) into out[0..dim).
  void next(double* out) {
    if (index_ > 0) {
      const int c = std::countr_zero(static_cast<std::uint64_t>(index_));
      for (std::size_t j = 0; j < dim_; ++j) state_[j] ^= v_[j][static_cast<std::size_t>(c)];
    }
    ++index_;
    for (std::size_t j = 0; j < dim_; ++j) {
      const std::uint32_t x = state_[j] ^ shift_[j];
      out[j] = (static_cast<double>(x) + 0.5) * 0x1.0p-32;
    }
  }

private:
  struct Primitive {
    unsigned s;
    unsigned a;
    std::array<std::uint32_t, 5> m;
  };

  void init_directions() {
    // new-joe-kuo-6.21201, dimensions 2..8
    static constexpr std::array<Primitive, kMaxDim - 1> table = {{
        {1, 0, {1, 0, 0, 0, 0}},
        {2, 1, {1, 3, 0, 0, 0}},
        {3, 1, {1, 3, 1, 0, 0}},
        {3, 2, {1, 1, 1, 0, 0}},
        {4, 1, {1, 1, 3, 3, 0}},
        {4, 4, {1, 3, 5, 13, 0}},
        {5, 2, {1, 1, 5, 5, 17}},
    }};
    v_.assign(dim_, std::array<std::uint32_t, kBits>{});
    for (int k = 0; k < kBits; ++k) v_[0][static_cast<std::size_t>(k)] = 1U << (31 - k);
    for (std::size_t j = 1; j < dim_; ++j) {
      const auto& p = table[j - 1];
      auto& v = v_[j];
      for (unsigned k = 0; k < p.s; ++k) v[k] = p.m[k] << (31 - k);
      for (unsigned k = p.s; k < static_cast<unsigned>(kBits); ++k) {
        std::uint32_t x = v[k - p.s] ^ (v[k - p.s] >> p.s);
        for (unsigned l = 1; l < p.s; ++l)
          if ((p.a >> (p.s - 1 - l)) & 1U) x ^= v[k - l];
        v[k] = x;
      }
    }
  }

  std::size_t dim_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint32_t> state_;
  std::vector<std::array<std::uint32_t, kBits>> v_;
  std::uint64_t index_ = 0;
};

} // namespace rare_union::math

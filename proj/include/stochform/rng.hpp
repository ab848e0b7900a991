#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace stochform {

/// Name recorded in output metadata for reproducibility.
inline constexpr std::string_view kRngAlgorithm =
    "philox4x32-10 (counter = step, key = splitmix64(base_seed, path)); Box-Muller normals";

/// One application of the Philox4x32 bijection with 10 rounds
/// (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of ensemble member `index`; independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// Counter-based source of standard normal vectors: draw(step, out) is a
/// pure function of (seed, step), so any subsequence can be regenerated.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept;
  /// Fills `out` with independent N(0,1) variates belonging to `step`.
  void draw(std::uint64_t step, std::span<double> out) const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint32_t, 2> key_;
};

/// Brownian increments on a fine grid of width `dt_fine`, optionally summed
/// over `refine` consecutive fine steps. Coarse paths built with refine = r
/// share the Brownian path of the fine one.
class BrownianIncrements {
 public:
  BrownianIncrements(std::uint64_t seed, double dt_fine, std::size_t m, std::size_t refine = 1);

  /// Increment for the next coarse step (length m).
  void next(std::span<double> dW) noexcept;
  double dt() const noexcept { return dt_fine_ * static_cast<double>(refine_); }
  std::size_t dimension() const noexcept { return m_; }

 private:
  NormalStream stream_;
  double dt_fine_;
  double sqrt_dt_fine_;
  std::size_t m_;
  std::size_t refine_;
  std::uint64_t fine_step_ = 0;
};

}  // namespace stochform

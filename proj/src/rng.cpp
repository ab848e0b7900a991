#include "stochform/rng.hpp"

#include <cmath>
#include <numbers>

#include "stochform/error.hpp"
#include "stochform/vec.hpp"

namespace stochform {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform in (0, 1]
inline double uniform_open0(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// 53-bit uniform in [0, 1)
inline double uniform_closed0(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(index ^ 0xa0761d6478bd642full));
}

NormalStream::NormalStream(std::uint64_t seed) noexcept
    : seed_(seed),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

void NormalStream::draw(std::uint64_t step, std::span<double> out) const noexcept {
  const auto lo = static_cast<std::uint32_t>(step);
  const auto hi = static_cast<std::uint32_t>(step >> 32);
  for (std::size_t block = 0; 2 * block < out.size(); ++block) {
    auto r = philox4x32_10({lo, hi, static_cast<std::uint32_t>(block), 0u}, key_);
    std::uint64_t a = (static_cast<std::uint64_t>(r[1]) << 32) | r[0];
    std::uint64_t b = (static_cast<std::uint64_t>(r[3]) << 32) | r[2];
    double radius = std::sqrt(-2.0 * std::log(uniform_open0(a)));
    double angle = 2.0 * std::numbers::pi * uniform_closed0(b);
    out[2 * block] = radius * std::cos(angle);
    if (2 * block + 1 < out.size()) out[2 * block + 1] = radius * std::sin(angle);
  }
}

BrownianIncrements::BrownianIncrements(std::uint64_t seed, double dt_fine, std::size_t m,
                                       std::size_t refine)
    : stream_(seed), dt_fine_(dt_fine), sqrt_dt_fine_(std::sqrt(dt_fine)), m_(m), refine_(refine) {
  if (!(dt_fine > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (refine == 0) throw Error(ErrorKind::InvalidArgument, "refine factor must be >= 1");
  if (m > kMaxDim) throw Error(ErrorKind::InvalidArgument, "too many noise fields");
}

void BrownianIncrements::next(std::span<double> dW) noexcept {
  std::array<double, kMaxDim> z{};
  for (std::size_t i = 0; i < m_; ++i) dW[i] = 0.0;
  for (std::size_t r = 0; r < refine_; ++r) {
    stream_.draw(fine_step_++, std::span<double>(z.data(), m_));
    for (std::size_t i = 0; i < m_; ++i) dW[i] += sqrt_dt_fine_ * z[i];
  }
}

}  // namespace stochform

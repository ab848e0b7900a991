#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace stochform {

/// Largest ambient dimension supported (S^7 or T^2).
inline constexpr std::size_t kMaxDim = 8;

/// Fixed-capacity real vector used for ambient / chart coordinates.
///
/// Lives on the stack so the integrator inner loops never allocate.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n) : size_(n) {
    if (n > kMaxDim) throw std::length_error("Vec: dimension exceeds kMaxDim");
  }
  Vec(std::initializer_list<double> xs) : Vec(xs.size()) {
    std::size_t i = 0;
    for (double x : xs) data_[i++] = x;
  }
  explicit Vec(std::span<const double> xs) : Vec(xs.size()) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] = xs[i];
  }

  static Vec zeros(std::size_t n) { return Vec(n); }
  static Vec unit(std::size_t n, std::size_t axis) {
    Vec v(n);
    v[axis] = 1.0;
    return v;
  }

  std::size_t size() const noexcept { return size_; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double* begin() noexcept { return data_.data(); }
  double* end() noexcept { return data_.data() + size_; }
  const double* begin() const noexcept { return data_.data(); }
  const double* end() const noexcept { return data_.data() + size_; }
  std::span<const double> span() const noexcept { return {data_.data(), size_}; }

  Vec& operator+=(const Vec& o) noexcept {
    for (std::size_t i = 0; i < size_; ++i) data_[i] += o.data_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) noexcept {
    for (std::size_t i = 0; i < size_; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Vec& operator*=(double s) noexcept {
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
    return *this;
  }
  /// this += s * o
  Vec& axpy(double s, const Vec& o) noexcept {
    for (std::size_t i = 0; i < size_; ++i) data_[i] += s * o.data_[i];
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
  friend Vec operator*(double s, Vec a) noexcept { return a *= s; }
  friend Vec operator*(Vec a, double s) noexcept { return a *= s; }
  friend bool operator==(const Vec& a, const Vec& b) noexcept {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (a.data_[i] != b.data_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> data_{};
  std::size_t size_ = 0;
};

inline double dot(const Vec& a, const Vec& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) noexcept { return std::sqrt(dot(a, a)); }

inline bool all_finite(const Vec& a) noexcept {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace stochform

#pragma once

// Sampled functions on a symmetric window of the real line. Second-class
// citizen: meant for the approximate scalar only, and its norm is the max
// over samples, which is a lower approximation of the sup over the line.
// The declared tail bound tracks |f| beyond the window through arithmetic.

#include <cstdlib>
#include <optional>
#include <vector>

#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
class GridGeometry {
 public:
  GridGeometry() : window_(0), step_(1) {}
  GridGeometry(long window, const Sc& step) : window_(window), step_(step) {
    require(window >= 0, Errc::parameter_out_of_range, "grid window must be nonnegative");
    require(step.sign() > 0, Errc::parameter_out_of_range, "grid step must be positive");
  }

  long window() const { return window_; }
  const Sc& step() const { return step_; }

  // Number of samples on [-window, window].
  std::size_t count() const {
    std::size_t per_side = 0;
    Sc t = step_;
    while (le_tol(t, Sc(window_))) {
      ++per_side;
      t += step_;
    }
    return 2 * per_side + 1;
  }

  Sc site(std::size_t k) const {
    long half = (static_cast<long>(count()) - 1) / 2;
    return Sc(static_cast<long>(k) - half) * step_;
  }

  friend bool operator==(const GridGeometry& a, const GridGeometry& b) {
    return a.window_ == b.window_ && a.step_ == b.step_;
  }

 private:
  long window_;
  Sc step_;
};

template <class Sc>
class GridFunction {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "grid";

  GridFunction() : tail_bound_(0) {}
  GridFunction(const GridGeometry<Sc>& geom, std::vector<Sc> samples, const Sc& tail_bound)
      : geom_(geom), samples_(std::move(samples)), tail_bound_(tail_bound) {
    require(samples_.size() == geom_.count(), Errc::parameter_out_of_range,
            "sample count does not match the grid");
    require(tail_bound_.sign() >= 0, Errc::parameter_out_of_range,
            "tail bound must be nonnegative");
  }

  template <class F>
  static GridFunction tabulate(const GridGeometry<Sc>& geom, F&& f, const Sc& tail_bound) {
    std::vector<Sc> s;
    s.reserve(geom.count());
    for (std::size_t k = 0; k < geom.count(); ++k) s.push_back(f(geom.site(k)));
    return GridFunction(geom, std::move(s), tail_bound);
  }

  const GridGeometry<Sc>& geometry() const { return geom_; }
  const std::vector<Sc>& samples() const { return samples_; }
  const Sc& tail_bound() const { return tail_bound_; }

  Sc norm() const {
    Sc m(0);
    for (const auto& v : samples_) m = max_val(m, abs_val(v));
    return m;
  }

  bool nonneg() const {
    for (const auto& v : samples_)
      if (v.sign() < 0) return false;
    return true;
  }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    a.check_same(b);
    GridFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] += b.samples_[k];
    out.tail_bound_ = a.tail_bound_ + b.tail_bound_;
    return out;
  }
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    a.check_same(b);
    GridFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] -= b.samples_[k];
    out.tail_bound_ = a.tail_bound_ + b.tail_bound_;
    return out;
  }
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    a.check_same(b);
    GridFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] *= b.samples_[k];
    out.tail_bound_ = a.tail_bound_ * b.tail_bound_;
    return out;
  }

  GridFunction scaled(const Sc& c) const {
    GridFunction out = *this;
    for (auto& v : out.samples_) v *= c;
    out.tail_bound_ = abs_val(c) * tail_bound_;
    return out;
  }

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.geom_ == b.geom_ && a.samples_ == b.samples_;
  }

 private:
  void check_same(const GridFunction& o) const {
    require(geom_ == o.geom_, Errc::instance_mismatch, "grids differ");
  }

  GridGeometry<Sc> geom_;
  std::vector<Sc> samples_;
  Sc tail_bound_;
};

// Unital companion: samples plus a constant value beyond the window.
template <class Sc>
class GridSuperFunction {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "grid-super";

  GridSuperFunction() : tail_(0) {}
  GridSuperFunction(const GridGeometry<Sc>& geom, std::vector<Sc> samples, const Sc& tail)
      : geom_(geom), samples_(std::move(samples)), tail_(tail) {
    require(samples_.size() == geom_.count(), Errc::parameter_out_of_range,
            "sample count does not match the grid");
  }

  static GridSuperFunction constant(const GridGeometry<Sc>& geom, const Sc& v) {
    return GridSuperFunction(geom, std::vector<Sc>(geom.count(), v), v);
  }
  static GridSuperFunction unit(const GridGeometry<Sc>& geom) { return constant(geom, Sc(1)); }

  static GridSuperFunction embed(const GridFunction<Sc>& f) {
    // Only sound when the declared tail bound is ~0; the embedding forgets it.
    return GridSuperFunction(f.geometry(), f.samples(), Sc(0));
  }

  const GridGeometry<Sc>& geometry() const { return geom_; }
  const std::vector<Sc>& samples() const { return samples_; }
  const Sc& tail() const { return tail_; }

  Sc norm() const {
    Sc m = abs_val(tail_);
    for (const auto& v : samples_) m = max_val(m, abs_val(v));
    return m;
  }

  friend GridSuperFunction operator+(const GridSuperFunction& a, const GridSuperFunction& b) {
    a.check_same(b);
    GridSuperFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] += b.samples_[k];
    out.tail_ += b.tail_;
    return out;
  }
  friend GridSuperFunction operator-(const GridSuperFunction& a, const GridSuperFunction& b) {
    a.check_same(b);
    GridSuperFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] -= b.samples_[k];
    out.tail_ -= b.tail_;
    return out;
  }
  friend GridSuperFunction operator*(const GridSuperFunction& a, const GridSuperFunction& b) {
    a.check_same(b);
    GridSuperFunction out = a;
    for (std::size_t k = 0; k < out.samples_.size(); ++k) out.samples_[k] *= b.samples_[k];
    out.tail_ *= b.tail_;
    return out;
  }
  friend GridFunction<Sc> operator*(const GridSuperFunction& b, const GridFunction<Sc>& f) {
    require(b.geom_ == f.geometry(), Errc::instance_mismatch, "grids differ");
    std::vector<Sc> s = f.samples();
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= b.samples_[k];
    return GridFunction<Sc>(f.geometry(), std::move(s), abs_val(b.tail_) * f.tail_bound());
  }

  GridSuperFunction scaled(const Sc& c) const {
    GridSuperFunction out = *this;
    for (auto& v : out.samples_) v *= c;
    out.tail_ *= c;
    return out;
  }

  GridSuperFunction pow(long n) const {
    if (n < 0) return reciprocal().pow(-n);
    GridSuperFunction out = *this;
    for (auto& v : out.samples_) v = v.pow(n);
    out.tail_ = tail_.pow(n);
    return out;
  }

  bool invertible() const {
    if (tail_.is_zero()) return false;
    for (const auto& v : samples_)
      if (v.is_zero()) return false;
    return true;
  }

  std::optional<GridSuperFunction> try_reciprocal() const {
    if (!invertible()) return std::nullopt;
    GridSuperFunction out = *this;
    for (auto& v : out.samples_) v = v.reciprocal();
    out.tail_ = tail_.reciprocal();
    return out;
  }

  GridSuperFunction reciprocal() const {
    auto r = try_reciprocal();
    require(r.has_value(), Errc::zero_value, "pointwise inverse hits a zero sample");
    return *r;
  }

  friend bool operator==(const GridSuperFunction& a, const GridSuperFunction& b) {
    return a.geom_ == b.geom_ && a.tail_ == b.tail_ && a.samples_ == b.samples_;
  }

 private:
  void check_same(const GridSuperFunction& o) const {
    require(geom_ == o.geom_, Errc::instance_mismatch, "grids differ");
  }

  GridGeometry<Sc> geom_;
  std::vector<Sc> samples_;
  Sc tail_;
};

template <class Sc>
Sc sup_dist(const GridFunction<Sc>& a, const GridFunction<Sc>& b) {
  return (a - b).norm();
}
template <class Sc>
Sc sup_dist(const GridSuperFunction<Sc>& a, const GridSuperFunction<Sc>& b) {
  return (a - b).norm();
}

}  // namespace powerfact

#pragma once

// Finitely supported functions on the integer line, sup norm.
// The non-unital algebra that gets factored through; also the module the
// left regular representation acts on.

#include <map>
#include <vector>

#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
class C0Line {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "c0-line";

  C0Line() = default;

  static C0Line spike(long site, Sc height) {
    C0Line f;
    f.set(site, height);
    return f;
  }

  void set(long site, const Sc& v) {
    if (v == Sc(0)) values_.erase(site);
    else values_[site] = v;
  }

  Sc at(long site) const {
    auto it = values_.find(site);
    return it == values_.end() ? Sc(0) : it->second;
  }

  const std::map<long, Sc>& support() const { return values_; }
  bool empty() const { return values_.empty(); }

  Sc norm() const {
    Sc m(0);
    for (const auto& [t, v] : values_) m = max_val(m, abs_val(v));
    return m;
  }

  bool nonneg() const {
    for (const auto& [t, v] : values_)
      if (v.sign() < 0) return false;
    return true;
  }

  C0Line operator-() const {
    C0Line out;
    for (const auto& [t, v] : values_) out.values_[t] = -v;
    return out;
  }

  friend C0Line operator+(const C0Line& a, const C0Line& b) {
    C0Line out = a;
    for (const auto& [t, v] : b.values_) out.set(t, out.at(t) + v);
    return out;
  }
  friend C0Line operator-(const C0Line& a, const C0Line& b) { return a + (-b); }
  friend C0Line operator*(const C0Line& a, const C0Line& b) {
    C0Line out;
    for (const auto& [t, v] : a.values_) {
      Sc w = b.at(t);
      if (!(w == Sc(0))) out.set(t, v * w);
    }
    return out;
  }

  C0Line scaled(const Sc& c) const {
    C0Line out;
    if (c == Sc(0)) return out;
    for (const auto& [t, v] : values_) out.set(t, c * v);
    return out;
  }

  friend bool operator==(const C0Line& a, const C0Line& b) { return a.values_ == b.values_; }
  friend bool operator!=(const C0Line& a, const C0Line& b) { return !(a == b); }

 private:
  std::map<long, Sc> values_;  // nonzero entries only
};

template <class Sc>
Sc sup_dist(const C0Line<Sc>& a, const C0Line<Sc>& b) {
  return (a - b).norm();
}

}  // namespace powerfact

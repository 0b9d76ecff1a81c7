#pragma once

// Unitization of the finitely supported line algebra: pairs (beta, a)
// standing for beta*1 + a, with the l1-style norm |beta| + ||a||.
// The order cone is the pair cone: beta >= 0 and a >= 0 pointwise.

#include <optional>

#include "powerfact/c0_line.hpp"
#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
class UnitizationPair {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "unitization-pair";

  UnitizationPair() : beta_(0) {}
  UnitizationPair(const Sc& beta, const C0Line<Sc>& a) : beta_(beta), a_(a) {}

  static UnitizationPair unit() { return UnitizationPair(Sc(1), {}); }

  const Sc& beta() const { return beta_; }
  const C0Line<Sc>& part() const { return a_; }

  // Value of beta*1 + a at a site.
  Sc at(long t) const { return beta_ + a_.at(t); }

  Sc norm() const { return abs_val(beta_) + a_.norm(); }

  bool in_cone() const { return beta_.sign() >= 0 && a_.nonneg(); }

  friend UnitizationPair operator+(const UnitizationPair& x, const UnitizationPair& y) {
    return {x.beta_ + y.beta_, x.a_ + y.a_};
  }
  friend UnitizationPair operator-(const UnitizationPair& x, const UnitizationPair& y) {
    return {x.beta_ - y.beta_, x.a_ - y.a_};
  }
  friend UnitizationPair operator*(const UnitizationPair& x, const UnitizationPair& y) {
    return {x.beta_ * y.beta_,
            y.a_.scaled(x.beta_) + x.a_.scaled(y.beta_) + x.a_ * y.a_};
  }

  UnitizationPair scaled(const Sc& c) const { return {c * beta_, a_.scaled(c)}; }

  bool invertible() const {
    if (beta_.is_zero()) return false;
    for (const auto& [t, v] : a_.support())
      if ((beta_ + v).is_zero()) return false;
    return true;
  }

  // (beta,a)^-1 = (1/beta, g) with g(t) = 1/(beta+a(t)) - 1/beta on supp a.
  std::optional<UnitizationPair> try_inverse() const {
    if (!invertible()) return std::nullopt;
    Sc ib = beta_.reciprocal();
    C0Line<Sc> g;
    for (const auto& [t, v] : a_.support()) g.set(t, (beta_ + v).reciprocal() - ib);
    return UnitizationPair(ib, g);
  }

  friend bool operator==(const UnitizationPair& x, const UnitizationPair& y) {
    return x.beta_ == y.beta_ && x.a_ == y.a_;
  }
  friend bool operator!=(const UnitizationPair& x, const UnitizationPair& y) {
    return !(x == y);
  }

 private:
  Sc beta_;
  C0Line<Sc> a_;
};

template <class Sc>
UnitizationPair<Sc> unitization_inverse(const UnitizationPair<Sc>& u) {
  auto inv = u.try_inverse();
  require(inv.has_value(), Errc::singular, "unitization element is not invertible");
  return *inv;
}

}  // namespace powerfact

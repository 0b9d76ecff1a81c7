#pragma once

// Functions on the integer line that are constant off a finite exceptional
// set. This is the unital superalgebra containing the chain elements b_k;
// inversion is pointwise and stays in the class.

#include <map>
#include <optional>

#include "powerfact/c0_line.hpp"
#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
class EventuallyConstantLine {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "eventually-constant-line";

  EventuallyConstantLine() : tail_(0) {}
  explicit EventuallyConstantLine(const Sc& tail) : tail_(tail) {}

  static EventuallyConstantLine unit() { return EventuallyConstantLine(Sc(1)); }

  static EventuallyConstantLine embed(const C0Line<Sc>& f) {
    EventuallyConstantLine out(Sc(0));
    for (const auto& [t, v] : f.support()) out.exceptional_[t] = v;
    return out;
  }

  void set(long site, const Sc& v) {
    if (v == tail_) exceptional_.erase(site);
    else exceptional_[site] = v;
  }

  Sc at(long site) const {
    auto it = exceptional_.find(site);
    return it == exceptional_.end() ? tail_ : it->second;
  }

  const Sc& tail() const { return tail_; }
  const std::map<long, Sc>& exceptional() const { return exceptional_; }

  Sc norm() const {
    Sc m = abs_val(tail_);
    for (const auto& [t, v] : exceptional_) m = max_val(m, abs_val(v));
    return m;
  }

  bool nonneg() const {
    if (tail_.sign() < 0) return false;
    for (const auto& [t, v] : exceptional_)
      if (v.sign() < 0) return false;
    return true;
  }

  // Pointwise combine over the union of exceptional sets; tails combine too.
  template <class F>
  static EventuallyConstantLine zip(const EventuallyConstantLine& a,
                                    const EventuallyConstantLine& b, F&& f) {
    EventuallyConstantLine out(f(a.tail_, b.tail_));
    for (const auto& [t, v] : a.exceptional_) out.set(t, f(v, b.at(t)));
    for (const auto& [t, v] : b.exceptional_) out.set(t, f(a.at(t), v));
    return out;
  }

  friend EventuallyConstantLine operator+(const EventuallyConstantLine& a,
                                          const EventuallyConstantLine& b) {
    return zip(a, b, [](const Sc& x, const Sc& y) { return x + y; });
  }
  friend EventuallyConstantLine operator-(const EventuallyConstantLine& a,
                                          const EventuallyConstantLine& b) {
    return zip(a, b, [](const Sc& x, const Sc& y) { return x - y; });
  }
  friend EventuallyConstantLine operator*(const EventuallyConstantLine& a,
                                          const EventuallyConstantLine& b) {
    return zip(a, b, [](const Sc& x, const Sc& y) { return x * y; });
  }

  EventuallyConstantLine operator-() const {
    EventuallyConstantLine out(-tail_);
    for (const auto& [t, v] : exceptional_) out.exceptional_[t] = -v;
    return out;
  }

  EventuallyConstantLine scaled(const Sc& c) const {
    EventuallyConstantLine out(c * tail_);
    for (const auto& [t, v] : exceptional_) out.set(t, c * v);
    return out;
  }

  EventuallyConstantLine pow(long n) const {
    if (n >= 0) {
      EventuallyConstantLine out(tail_.pow(n));
      for (const auto& [t, v] : exceptional_) out.set(t, v.pow(n));
      return out;
    }
    return reciprocal().pow(-n);
  }

  bool invertible() const {
    if (tail_.is_zero()) return false;
    for (const auto& [t, v] : exceptional_)
      if (v.is_zero()) return false;
    return true;
  }

  std::optional<EventuallyConstantLine> try_reciprocal() const {
    if (!invertible()) return std::nullopt;
    EventuallyConstantLine out(tail_.reciprocal());
    for (const auto& [t, v] : exceptional_) out.set(t, v.reciprocal());
    return out;
  }

  EventuallyConstantLine reciprocal() const {
    auto r = try_reciprocal();
    require(r.has_value(), Errc::zero_value, "pointwise inverse hits a zero value");
    return *r;
  }

  // Multiplication against the ideal of finitely supported functions.
  friend C0Line<Sc> operator*(const EventuallyConstantLine& b, const C0Line<Sc>& f) {
    C0Line<Sc> out;
    for (const auto& [t, v] : f.support()) out.set(t, b.at(t) * v);
    return out;
  }

  friend bool operator==(const EventuallyConstantLine& a, const EventuallyConstantLine& b) {
    return a.tail_ == b.tail_ && a.exceptional_ == b.exceptional_;
  }
  friend bool operator!=(const EventuallyConstantLine& a, const EventuallyConstantLine& b) {
    return !(a == b);
  }

 private:
  std::map<long, Sc> exceptional_;  // sites where value != tail
  Sc tail_;
};

template <class Sc>
Sc sup_dist(const EventuallyConstantLine<Sc>& a, const EventuallyConstantLine<Sc>& b) {
  return (a - b).norm();
}

// Pointwise inverse with the error-reporting contract of the module surface.
template <class Sc>
EventuallyConstantLine<Sc> pointwise_invert(const EventuallyConstantLine<Sc>& b) {
  return b.reciprocal();
}

}  // namespace powerfact

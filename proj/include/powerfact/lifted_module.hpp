#pragma once

// Lifted modules: families of module values over a finite index set, or
// eventually constant sequences (finite prefix plus the constant limit),
// with pointwise action and sup norm. The same algebra factors the whole
// family at once.

#include <optional>
#include <string>
#include <vector>

#include "powerfact/representation.hpp"

namespace powerfact {

template <class M>
class LiftedValue {
 public:
  static LiftedValue family(std::vector<M> terms) {
    require(!terms.empty(), Errc::parameter_out_of_range, "empty lifted family");
    LiftedValue v;
    v.terms_ = std::move(terms);
    return v;
  }

  // terms_ holds the prefix; every later term equals *limit_ exactly.
  static LiftedValue sequence(std::vector<M> prefix, M limit) {
    LiftedValue v;
    v.terms_ = std::move(prefix);
    v.limit_ = std::move(limit);
    return v;
  }

  bool is_sequence() const { return limit_.has_value(); }
  const std::vector<M>& terms() const { return terms_; }
  const M& limit() const {
    require(limit_.has_value(), Errc::precondition_failed, "family value has no limit term");
    return *limit_;
  }

  template <class F>
  LiftedValue map(F&& f) const {
    LiftedValue out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back(f(t));
    if (limit_) out.limit_ = f(*limit_);
    return out;
  }

  template <class F>
  static LiftedValue zip(const LiftedValue& a, const LiftedValue& b, F&& f) {
    require(a.terms_.size() == b.terms_.size() && a.is_sequence() == b.is_sequence(),
            Errc::instance_mismatch, "lifted shapes differ");
    LiftedValue out;
    out.terms_.reserve(a.terms_.size());
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      out.terms_.push_back(f(a.terms_[k], b.terms_[k]));
    if (a.limit_) out.limit_ = f(*a.limit_, *b.limit_);
    return out;
  }

  friend LiftedValue operator+(const LiftedValue& a, const LiftedValue& b) {
    return zip(a, b, [](const M& x, const M& y) { return x + y; });
  }
  friend LiftedValue operator-(const LiftedValue& a, const LiftedValue& b) {
    return zip(a, b, [](const M& x, const M& y) { return x - y; });
  }

  template <class Sc>
  LiftedValue scaled(const Sc& c) const {
    return map([&](const M& x) { return x.scaled(c); });
  }

  friend bool operator==(const LiftedValue& a, const LiftedValue& b) {
    return a.terms_ == b.terms_ && a.limit_ == b.limit_;
  }

 private:
  std::vector<M> terms_;
  std::optional<M> limit_;
};

template <class BaseRep>
struct LiftedRep {
  using Scalar = typename BaseRep::Scalar;
  using AlgebraElem = typename BaseRep::AlgebraElem;
  using SuperElem = typename BaseRep::SuperElem;
  using ModuleElem = LiftedValue<typename BaseRep::ModuleElem>;

  BaseRep base;

  Scalar pi_norm() const { return base.pi_norm(); }
  SuperElem unit() const { return base.unit(); }
  SuperElem embed(const AlgebraElem& a) const { return base.embed(a); }
  ModuleElem act(const SuperElem& b, const ModuleElem& x) const {
    return x.map([&](const auto& term) { return base.act(b, term); });
  }
  Scalar module_norm(const ModuleElem& x) const {
    Scalar m(0);
    for (const auto& t : x.terms()) m = max_val(m, base.module_norm(t));
    if (x.is_sequence()) m = max_val(m, base.module_norm(x.limit()));
    return m;
  }
  Scalar super_norm(const SuperElem& b) const { return base.super_norm(b); }
  std::optional<SuperElem> try_invert(const SuperElem& b) const { return base.try_invert(b); }
  bool module_nonneg(const ModuleElem& x) const {
    for (const auto& t : x.terms())
      if (!base.module_nonneg(t)) return false;
    return !x.is_sequence() || base.module_nonneg(x.limit());
  }
  bool check_envelope(const ModuleElem& x, const Envelope<Scalar>& env) const {
    if constexpr (requires(const typename BaseRep::ModuleElem& m) {
                    base.check_envelope(m, env);
                  }) {
      for (const auto& t : x.terms())
        if (!base.check_envelope(t, env)) return false;
      return !x.is_sequence() || base.check_envelope(x.limit(), env);
    } else {
      return false;
    }
  }
  IdentityNet<AlgebraElem> net(NetKind kind) const { return base.net(kind); }
};

template <class BaseRep>
LiftedRep<BaseRep> lift(const BaseRep& base) {
  return LiftedRep<BaseRep>{base};
}

template <class BaseRep>
std::string rep_tag(const LiftedRep<BaseRep>&) {
  return std::string("lifted:") + BaseRep::tag;
}

// The zero-limit subspace is preserved by the action; this is the exact
// check used by the certificates.
template <class BaseRep>
bool has_zero_limit(const LiftedRep<BaseRep>& rep,
                    const typename LiftedRep<BaseRep>::ModuleElem& x) {
  return x.is_sequence() && rep.base.module_norm(x.limit()).is_zero();
}

}  // namespace powerfact

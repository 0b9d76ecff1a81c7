#pragma once

// Module structures: an algebra, the unital superalgebra it sits in, and a
// module the superalgebra acts on. Each representation bundles the action,
// the norms, instance-delegated inversion, and its declared action norm.

#include <optional>
#include <string>
#include <vector>

#include "powerfact/c0_line.hpp"
#include "powerfact/envelope.hpp"
#include "powerfact/eventually_constant_line.hpp"
#include "powerfact/grid_function.hpp"
#include "powerfact/identity_net.hpp"
#include "powerfact/matrix_algebra.hpp"

namespace powerfact {

// Left regular: c0 functions acting on themselves through the eventually
// constant superalgebra, all pointwise.
template <class Sc>
struct LineLeftRegular {
  using Scalar = Sc;
  using AlgebraElem = C0Line<Sc>;
  using SuperElem = EventuallyConstantLine<Sc>;
  using ModuleElem = C0Line<Sc>;
  static constexpr const char* tag = "line-left-regular";

  Sc pi_norm() const { return Sc(1); }
  SuperElem unit() const { return SuperElem::unit(); }
  SuperElem embed(const AlgebraElem& a) const { return SuperElem::embed(a); }
  ModuleElem act(const SuperElem& b, const ModuleElem& x) const { return b * x; }
  Sc module_norm(const ModuleElem& x) const { return x.norm(); }
  Sc super_norm(const SuperElem& b) const { return b.norm(); }
  std::optional<SuperElem> try_invert(const SuperElem& b) const { return b.try_reciprocal(); }
  bool module_nonneg(const ModuleElem& x) const { return x.nonneg(); }
  bool check_envelope(const ModuleElem& x, const Envelope<Sc>& env) const {
    return check_membership(x, env).ok;
  }
  IdentityNet<AlgebraElem> net(NetKind kind) const {
    return make_identity_net<Sc>(kind, LineInstance{});
  }
};

template <class Sc>
struct MatrixLeftRegular {
  using Scalar = Sc;
  using AlgebraElem = MatrixAlgebra<Sc>;
  using SuperElem = MatrixAlgebra<Sc>;
  using ModuleElem = MatrixAlgebra<Sc>;
  static constexpr const char* tag = "matrix-left-regular";

  std::size_t dim = 2;

  Sc pi_norm() const { return Sc(1); }
  SuperElem unit() const { return SuperElem::identity(dim); }
  SuperElem embed(const AlgebraElem& a) const { return a; }
  ModuleElem act(const SuperElem& b, const ModuleElem& x) const { return b * x; }
  Sc module_norm(const ModuleElem& x) const { return x.norm(); }
  Sc super_norm(const SuperElem& b) const { return b.norm(); }
  std::optional<SuperElem> try_invert(const SuperElem& b) const { return b.try_inverse(); }
  bool module_nonneg(const ModuleElem& x) const { return x.nonneg(); }
  IdentityNet<AlgebraElem> net(NetKind kind) const {
    return make_identity_net<Sc>(kind, MatrixInstance{dim});
  }
};

template <class Sc>
struct GridLeftRegular {
  using Scalar = Sc;
  using AlgebraElem = GridFunction<Sc>;
  using SuperElem = GridSuperFunction<Sc>;
  using ModuleElem = GridFunction<Sc>;
  static constexpr const char* tag = "grid-left-regular";

  GridGeometry<Sc> geom;

  Sc pi_norm() const { return Sc(1); }
  SuperElem unit() const { return SuperElem::unit(geom); }
  SuperElem embed(const AlgebraElem& a) const { return SuperElem::embed(a); }
  ModuleElem act(const SuperElem& b, const ModuleElem& x) const { return b * x; }
  Sc module_norm(const ModuleElem& x) const { return x.norm(); }
  Sc super_norm(const SuperElem& b) const { return b.norm(); }
  std::optional<SuperElem> try_invert(const SuperElem& b) const { return b.try_reciprocal(); }
  bool module_nonneg(const ModuleElem& x) const { return x.nonneg(); }
  IdentityNet<AlgebraElem> net(NetKind kind) const {
    return make_identity_net<Sc>(kind, GridInstance<Sc>{geom});
  }
};

template <class Rep>
std::string rep_tag(const Rep&) {
  return Rep::tag;
}

// Declared facts about a probe, verified when the probe is built.
template <class Sc>
struct ProbeClaims {
  std::optional<Sc> bound;                 // sup of norms, if S is claimed bounded
  bool cone = false;                       // every element in the module cone
  std::optional<Envelope<Sc>> envelope;    // solid-set predicate (line family only)
};

template <class Rep>
class ProbeSet {
 public:
  using ModuleElem = typename Rep::ModuleElem;
  using Sc = typename Rep::Scalar;

  ProbeSet(const Rep& rep, std::vector<ModuleElem> elems, ProbeClaims<Sc> claims)
      : elems_(std::move(elems)), claims_(std::move(claims)) {
    require(!elems_.empty(), Errc::precondition_failed, "empty probe");
    for (const auto& s : elems_) {
      if (claims_.bound)
        require(le_tol(rep.module_norm(s), *claims_.bound), Errc::precondition_failed,
                "probe element exceeds the claimed bound");
      if (claims_.cone)
        require(rep.module_nonneg(s), Errc::precondition_failed,
                "probe element is outside the claimed cone");
      if (claims_.envelope) {
        if constexpr (requires { rep.check_envelope(s, *claims_.envelope); }) {
          require(rep.check_envelope(s, *claims_.envelope), Errc::not_in_s,
                  "probe element violates the envelope predicate");
        } else {
          fail(Errc::precondition_failed, "envelope claim unsupported by this instance");
        }
      }
    }
  }

  const std::vector<ModuleElem>& elements() const { return elems_; }
  const ProbeClaims<Sc>& claims() const { return claims_; }

 private:
  std::vector<ModuleElem> elems_;
  ProbeClaims<Sc> claims_;
};

template <class Rep>
typename Rep::Scalar uniform_residual(const Rep& rep,
                                      const typename Rep::AlgebraElem& e,
                                      const std::vector<typename Rep::ModuleElem>& elems) {
  typename Rep::Scalar worst(0);
  auto be = rep.embed(e);
  for (const auto& s : elems)
    worst = max_val(worst, rep.module_norm(rep.act(be, s) - s));
  return worst;
}

template <class Sc>
struct ThresholdScan {
  std::optional<long> threshold;  // least index reaching the tolerance
  long cap = 0;
  Sc best_residual;               // smallest residual seen over the scan
  long best_index = 0;
};

// Least nu <= cap with max_s ||pi(e_nu)s - s|| < tol.
template <class Rep>
ThresholdScan<typename Rep::Scalar> uniformity_threshold(
    const Rep& rep, const IdentityNet<typename Rep::AlgebraElem>& net,
    const std::vector<typename Rep::ModuleElem>& elems, const typename Rep::Scalar& tol,
    long cap) {
  using Sc = typename Rep::Scalar;
  require(cap >= 1, Errc::parameter_out_of_range, "scan cap must be >= 1");
  ThresholdScan<Sc> scan;
  scan.cap = cap;
  bool first = true;
  for (long nu = 1; nu <= cap; ++nu) {
    Sc res = uniform_residual(rep, net.at(nu), elems);
    if (first || res < scan.best_residual) {
      scan.best_residual = res;
      scan.best_index = nu;
      first = false;
    }
    if (lt_tol(res, tol)) {
      scan.threshold = nu;
      return scan;
    }
  }
  return scan;
}

}  // namespace powerfact

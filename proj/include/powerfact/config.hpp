#pragma once

// Run parameters for the inductive construction, the alpha growth law, and
// the decay schedules the worked example measures envelopes against.

#include <optional>
#include <string>
#include <vector>

#include "powerfact/errors.hpp"
#include "powerfact/scalar.hpp"

namespace powerfact {

enum class Path { bounded_probe, commutative };

inline const char* path_name(Path p) {
  return p == Path::bounded_probe ? "bounded-probe" : "commutative";
}
inline Path parse_path(const std::string& s) {
  if (s == "bounded-probe") return Path::bounded_probe;
  if (s == "commutative") return Path::commutative;
  fail(Errc::bad_config, "unknown path '" + s + "'");
}

// alpha_n = 1 + c n^p, nondecreasing to infinity.
template <class Sc>
struct AlphaLaw {
  Sc coeff = Sc(1);
  int power = 1;

  void validate() const {
    require(coeff.sign() > 0, Errc::parameter_out_of_range, "alpha coefficient must be > 0");
    require(power == 1 || power == 2, Errc::parameter_out_of_range,
            "alpha exponent must be 1 or 2");
  }
  Sc at(long n) const {
    require(n >= 1, Errc::parameter_out_of_range, "alpha is indexed from 1");
    return Sc(1) + coeff * Sc(n).pow(power);
  }
};

template <class Sc>
struct FactorizationConfig {
  Sc r = Sc(1, 4);
  Sc epsilon = Sc(1, 10);
  Sc delta = Sc(1);
  long n0 = 2;
  AlphaLaw<Sc> alpha;
  long steps = 3;             // chain length K
  long index_cap = 1000000;
  Sc tau = default_tau();
  Path path = Path::commutative;
  std::optional<std::vector<long>> forced_indices;

  static Sc default_tau() {
    if constexpr (Sc::exact) return Sc(1, 1000000000);
    else return Sc::tolerance();
  }

  void validate(const Sc& M) const {
    require(M >= Sc(1), Errc::parameter_out_of_range, "net bound M must be >= 1");
    require(r.sign() > 0 && r * (M + Sc(1)) < Sc(1), Errc::parameter_out_of_range,
            "need 0 < r < 1/(M+1)");
    require(epsilon.sign() > 0, Errc::parameter_out_of_range, "epsilon must be > 0");
    require(delta.sign() > 0 && le_tol(delta, Sc(1)), Errc::parameter_out_of_range,
            "delta must lie in (0, 1]");
    require(n0 >= 1, Errc::parameter_out_of_range, "n0 must be >= 1");
    alpha.validate();
    require(steps >= 1, Errc::parameter_out_of_range, "need at least one chain step");
    require(index_cap >= 1, Errc::parameter_out_of_range, "index cap must be >= 1");
    require(positive_raw(tau), Errc::parameter_out_of_range, "tau must be > 0");
    if (forced_indices) {
      require(static_cast<long>(forced_indices->size()) >= steps, Errc::parameter_out_of_range,
              "forced index list shorter than the chain");
      long prev = 0;
      for (long nu : *forced_indices) {
        require(nu > prev, Errc::parameter_out_of_range,
                "forced indices must be strictly increasing");
        prev = nu;
      }
    }
  }

  // Delta = (1 - r - rM)^{-1} + 1; the chain inverse growth base.
  Sc delta_bound(const Sc& M) const { return (Sc(1) - r - r * M).reciprocal() + Sc(1); }

  // Working epsilon: at most inf{delta, (alpha_n^n - 1) delta}; the inf is
  // attained at n = 1 since the law is nondecreasing.
  Sc epsilon_effective() const {
    Sc cap = min_val(delta, (alpha.at(1) - Sc(1)) * delta);
    return min_val(epsilon, cap);
  }
  bool epsilon_tightened() const { return epsilon_effective() < epsilon; }
};

// Decay schedules d(i) for the worked example's envelope thresholds.
template <class Sc>
struct DecaySchedule {
  enum class Kind { gaussian_rational, gaussian_exp, geometric };
  Kind kind = Kind::gaussian_rational;
  Sc base = Sc(4);    // gaussian_rational: d(i) = base^{-i^2}
  Sc ratio = Sc(1, 2);  // geometric: d(i) = ratio^i

  static DecaySchedule gaussian_rational(const Sc& b) {
    require(b > Sc(1), Errc::parameter_out_of_range, "gaussian base must exceed 1");
    return {Kind::gaussian_rational, b, Sc(1, 2)};
  }
  static DecaySchedule gaussian_exp() {
    require(!Sc::exact, Errc::parameter_out_of_range,
            "the e^{-i^2} schedule needs the approximate scalar");
    return {Kind::gaussian_exp, Sc(0), Sc(1, 2)};
  }
  static DecaySchedule geometric(const Sc& q) {
    require(q.sign() > 0 && q < Sc(1), Errc::parameter_out_of_range,
            "geometric ratio must lie in (0, 1)");
    return {Kind::geometric, Sc(0), q};
  }

  Sc at(long i) const {
    require(i >= 1, Errc::parameter_out_of_range, "decay schedule is indexed from 1");
    switch (kind) {
      case Kind::gaussian_rational: return base.pow(i * i).reciprocal();
      case Kind::gaussian_exp: {
        if constexpr (!Sc::exact)
          return Sc(std::exp(-static_cast<double>(i) * static_cast<double>(i)));
        fail(Errc::parameter_out_of_range, "e^{-i^2} schedule in exact mode");
      }
      case Kind::geometric: return ratio.pow(i);
    }
    fail(Errc::parameter_out_of_range, "unknown decay schedule");
  }

  // d(i+1)/d(i); decreasing to 0 for the gaussian kinds, constant otherwise.
  Sc step_ratio(long i) const {
    switch (kind) {
      case Kind::gaussian_rational: return base.pow(2 * i + 1).reciprocal();
      case Kind::gaussian_exp: {
        if constexpr (!Sc::exact)
          return Sc(std::exp(-static_cast<double>(2 * i + 1)));
        fail(Errc::parameter_out_of_range, "e^{-i^2} schedule in exact mode");
      }
      case Kind::geometric: return ratio;
    }
    fail(Errc::parameter_out_of_range, "unknown decay schedule");
  }

  bool step_ratio_vanishes() const { return kind != Kind::geometric; }

  std::string name() const {
    switch (kind) {
      case Kind::gaussian_rational: return "gaussian-rational";
      case Kind::gaussian_exp: return "gaussian-exp";
      case Kind::geometric: return "geometric";
    }
    return "unknown";
  }
};

}  // namespace powerfact

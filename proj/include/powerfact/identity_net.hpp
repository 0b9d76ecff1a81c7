#pragma once

// Indexed approximate left identities. The index set is {1, 2, 3, ...} and a
// net is a generator plus its declared data: the uniform norm bound M, and
// whether the net commutes with / is positive in its algebra.

#include <cstddef>
#include <functional>
#include <string>

#include "powerfact/c0_line.hpp"
#include "powerfact/grid_function.hpp"
#include "powerfact/matrix_algebra.hpp"

namespace powerfact {

enum class NetKind { plateau, deficient_plateau, constant_identity };

inline const char* net_kind_name(NetKind k) {
  switch (k) {
    case NetKind::plateau: return "plateau";
    case NetKind::deficient_plateau: return "deficient-plateau";
    case NetKind::constant_identity: return "constant-identity";
  }
  return "unknown";
}

inline NetKind parse_net_kind(const std::string& s) {
  if (s == "plateau") return NetKind::plateau;
  if (s == "deficient-plateau") return NetKind::deficient_plateau;
  if (s == "constant-identity") return NetKind::constant_identity;
  fail(Errc::bad_config, "unknown net kind '" + s + "'");
}

template <class Elem>
struct IdentityNet {
  using Scalar = typename Elem::Scalar;

  NetKind kind;
  Scalar bound;  // M >= sup_nu ||e_nu||
  bool commutative;
  bool positive;
  std::function<Elem(long)> generator;

  Elem at(long nu) const {
    require(nu >= 1, Errc::parameter_out_of_range, "net index must be >= 1");
    return generator(nu);
  }
};

struct LineInstance {};
struct MatrixInstance { std::size_t dim; };
template <class Sc>
struct GridInstance { GridGeometry<Sc> geom; };

// e_nu = 1 on [-nu, nu]  (plateau), or (1 - 1/nu) there (deficient).
template <class Sc>
IdentityNet<C0Line<Sc>> make_identity_net(NetKind kind, LineInstance) {
  require(kind == NetKind::plateau || kind == NetKind::deficient_plateau,
          Errc::parameter_out_of_range,
          std::string(net_kind_name(kind)) + " net is not defined on the line instance");
  IdentityNet<C0Line<Sc>> net;
  net.kind = kind;
  net.bound = Sc(1);
  net.commutative = true;
  net.positive = true;
  bool deficient = kind == NetKind::deficient_plateau;
  net.generator = [deficient](long nu) {
    C0Line<Sc> e;
    Sc v = deficient ? Sc(1) - Sc(1, nu) : Sc(1);
    for (long t = -nu; t <= nu; ++t) e.set(t, v);
    return e;
  };
  return net;
}

template <class Sc>
IdentityNet<MatrixAlgebra<Sc>> make_identity_net(NetKind kind, MatrixInstance inst) {
  require(kind == NetKind::constant_identity, Errc::parameter_out_of_range,
          std::string(net_kind_name(kind)) + " net is not defined on the matrix instance");
  IdentityNet<MatrixAlgebra<Sc>> net;
  net.kind = kind;
  net.bound = Sc(1);
  net.commutative = true;
  net.positive = true;
  net.generator = [dim = inst.dim](long) { return MatrixAlgebra<Sc>::identity(dim); };
  return net;
}

// Plateau with a one-unit linear ramp: 1 on [-nu, nu], 0 beyond nu + 1.
template <class Sc>
IdentityNet<GridFunction<Sc>> make_identity_net(NetKind kind, GridInstance<Sc> inst) {
  require(kind == NetKind::plateau || kind == NetKind::deficient_plateau,
          Errc::parameter_out_of_range,
          std::string(net_kind_name(kind)) + " net is not defined on the grid instance");
  IdentityNet<GridFunction<Sc>> net;
  net.kind = kind;
  net.bound = Sc(1);
  net.commutative = true;
  net.positive = true;
  bool deficient = kind == NetKind::deficient_plateau;
  net.generator = [geom = inst.geom, deficient](long nu) {
    Sc peak = deficient ? Sc(1) - Sc(1, nu) : Sc(1);
    return GridFunction<Sc>::tabulate(
        geom,
        [&](const Sc& t) {
          Sc h = Sc(nu + 1) - abs_val(t);
          return peak * max_val(Sc(0), min_val(Sc(1), h));
        },
        Sc(0));
  };
  return net;
}

}  // namespace powerfact

#pragma once

// Explicit polynomial witnesses p with p(b) = b^{-1}. The existence of such
// p places the inverse inside the unital subalgebra generated by b, hence
// inside the one generated by the chain elements. Function instances get a
// reciprocal interpolant through the finite value set; matrices get the
// characteristic-polynomial recursion.

#include <vector>

#include "powerfact/eventually_constant_line.hpp"
#include "powerfact/grid_function.hpp"
#include "powerfact/matrix_algebra.hpp"

namespace powerfact {

template <class Sc>
struct InverseWitness {
  std::vector<Sc> coeffs;  // p, constant term first
  Sc discrepancy;          // ||p(b) - b^{-1}||
  bool ok = false;
};

template <class Sc>
void push_distinct(std::vector<Sc>& vals, const Sc& v) {
  for (const auto& w : vals)
    if (eq_tol(w, v)) return;
  vals.push_back(v);
}

template <class Sc>
std::vector<Sc> value_set(const EventuallyConstantLine<Sc>& b) {
  std::vector<Sc> vals;
  push_distinct(vals, b.tail());
  for (const auto& [t, v] : b.exceptional()) push_distinct(vals, v);
  return vals;
}

template <class Sc>
std::vector<Sc> value_set(const GridSuperFunction<Sc>& b) {
  std::vector<Sc> vals;
  push_distinct(vals, b.tail());
  for (const auto& v : b.samples()) push_distinct(vals, v);
  return vals;
}

// Lagrange interpolation of v -> 1/v through distinct nonzero values.
template <class Sc>
std::vector<Sc> reciprocal_interpolant(const std::vector<Sc>& values) {
  require(!values.empty(), Errc::precondition_failed, "empty value set");
  std::vector<Sc> p(values.size(), Sc(0));
  for (std::size_t j = 0; j < values.size(); ++j) {
    require(!values[j].is_zero(), Errc::zero_value, "value set contains zero");
    std::vector<Sc> basis{Sc(1)};  // prod_{l != j} (X - v_l), low degree first
    Sc denom(1);
    for (std::size_t l = 0; l < values.size(); ++l) {
      if (l == j) continue;
      basis.insert(basis.begin(), Sc(0));
      for (std::size_t m = 0; m + 1 < basis.size(); ++m)
        basis[m] -= values[l] * basis[m + 1];
      denom *= values[j] - values[l];
    }
    Sc weight = (values[j] * denom).reciprocal();
    for (std::size_t m = 0; m < basis.size(); ++m) p[m] += weight * basis[m];
  }
  return p;
}

template <class Elem, class Sc>
Elem poly_eval(const std::vector<Sc>& coeffs, const Elem& unit, const Elem& b) {
  require(!coeffs.empty(), Errc::precondition_failed, "empty polynomial");
  Elem acc = unit.scaled(coeffs.back());
  for (std::size_t m = coeffs.size() - 1; m-- > 0;) acc = acc * b + unit.scaled(coeffs[m]);
  return acc;
}

template <class Sc>
InverseWitness<Sc> inverse_witness(const EventuallyConstantLine<Sc>& b,
                                   const EventuallyConstantLine<Sc>& b_inv, const Sc& tau) {
  InverseWitness<Sc> w;
  w.coeffs = reciprocal_interpolant(value_set(b));
  w.discrepancy = sup_dist(poly_eval(w.coeffs, EventuallyConstantLine<Sc>::unit(), b), b_inv);
  w.ok = le_tol(w.discrepancy, tau);
  return w;
}

template <class Sc>
InverseWitness<Sc> inverse_witness(const GridSuperFunction<Sc>& b,
                                   const GridSuperFunction<Sc>& b_inv, const Sc& tau) {
  InverseWitness<Sc> w;
  w.coeffs = reciprocal_interpolant(value_set(b));
  w.discrepancy =
      sup_dist(poly_eval(w.coeffs, GridSuperFunction<Sc>::unit(b.geometry()), b), b_inv);
  w.ok = le_tol(w.discrepancy, tau);
  return w;
}

// Characteristic-polynomial route: with X^d + c_1 X^{d-1} + ... + c_d the
// characteristic polynomial, b^{-1} = -(b^{d-1} + c_1 b^{d-2} + ... +
// c_{d-1} 1)/c_d. The c_k come from the trace recursion.
template <class Sc>
InverseWitness<Sc> inverse_witness(const MatrixAlgebra<Sc>& b, const MatrixAlgebra<Sc>& b_inv,
                                   const Sc& tau) {
  const std::size_t d = b.dim();
  require(d >= 1, Errc::precondition_failed, "empty matrix");
  auto trace = [&](const MatrixAlgebra<Sc>& m) {
    Sc t(0);
    for (std::size_t i = 0; i < d; ++i) t += m.at(i, i);
    return t;
  };
  std::vector<Sc> c{Sc(1)};  // c_0 = 1
  auto m = MatrixAlgebra<Sc>::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    if (k > 1) m = b * m + MatrixAlgebra<Sc>::identity(d).scaled(c.back());
    c.push_back(-(trace(b * m) / Sc(static_cast<long>(k))));
  }
  require(!c[d].is_zero(), Errc::singular, "characteristic constant term vanishes");
  InverseWitness<Sc> w;
  Sc scale = -c[d].reciprocal();
  w.coeffs.resize(d);
  for (std::size_t q = 0; q < d; ++q) w.coeffs[q] = scale * c[d - 1 - q];
  w.discrepancy = sup_dist(poly_eval(w.coeffs, MatrixAlgebra<Sc>::identity(d), b), b_inv);
  w.ok = le_tol(w.discrepancy, tau);
  return w;
}

}  // namespace powerfact

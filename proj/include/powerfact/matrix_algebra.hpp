#pragma once

// Square matrices under the max absolute row sum norm. Unital; serves as its
// own superalgebra. Inversion is Gauss-Jordan, exact when the scalar is.

#include <optional>
#include <vector>

#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
class MatrixAlgebra {
 public:
  using Scalar = Sc;
  static constexpr const char* instance_tag = "matrix";

  MatrixAlgebra() : dim_(0) {}
  explicit MatrixAlgebra(std::size_t dim) : dim_(dim), a_(dim * dim, Sc(0)) {}

  static MatrixAlgebra identity(std::size_t dim) {
    MatrixAlgebra m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = Sc(1);
    return m;
  }

  std::size_t dim() const { return dim_; }
  Sc& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Sc& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  Sc norm() const {
    Sc best(0);
    for (std::size_t i = 0; i < dim_; ++i) {
      Sc row(0);
      for (std::size_t j = 0; j < dim_; ++j) row += abs_val(at(i, j));
      best = max_val(best, row);
    }
    return best;
  }

  bool nonneg() const {
    for (const auto& v : a_)
      if (v.sign() < 0) return false;
    return true;
  }

  friend MatrixAlgebra operator+(const MatrixAlgebra& x, const MatrixAlgebra& y) {
    MatrixAlgebra out = x;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] += y.a_[k];
    return out;
  }
  friend MatrixAlgebra operator-(const MatrixAlgebra& x, const MatrixAlgebra& y) {
    MatrixAlgebra out = x;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] -= y.a_[k];
    return out;
  }
  friend MatrixAlgebra operator*(const MatrixAlgebra& x, const MatrixAlgebra& y) {
    MatrixAlgebra out(x.dim_);
    for (std::size_t i = 0; i < x.dim_; ++i)
      for (std::size_t k = 0; k < x.dim_; ++k) {
        const Sc& xik = x.at(i, k);
        if (xik == Sc(0)) continue;
        for (std::size_t j = 0; j < x.dim_; ++j) out.at(i, j) += xik * y.at(k, j);
      }
    return out;
  }

  MatrixAlgebra operator-() const { return MatrixAlgebra(dim_) - *this; }

  MatrixAlgebra scaled(const Sc& c) const {
    MatrixAlgebra out = *this;
    for (auto& v : out.a_) v *= c;
    return out;
  }

  MatrixAlgebra pow(long n) const {
    if (n < 0) {
      auto inv = try_inverse();
      require(inv.has_value(), Errc::singular, "negative power of a singular matrix");
      return inv->pow(-n);
    }
    MatrixAlgebra acc = identity(dim_);
    for (long k = 0; k < n; ++k) acc = acc * *this;
    return acc;
  }

  std::optional<MatrixAlgebra> try_inverse() const {
    MatrixAlgebra work = *this;
    MatrixAlgebra inv = identity(dim_);
    for (std::size_t col = 0; col < dim_; ++col) {
      std::size_t pivot = col;
      while (pivot < dim_ && work.at(pivot, col).is_zero()) ++pivot;
      if (pivot == dim_) return std::nullopt;
      if (pivot != col) {
        for (std::size_t j = 0; j < dim_; ++j) {
          std::swap(work.at(pivot, j), work.at(col, j));
          std::swap(inv.at(pivot, j), inv.at(col, j));
        }
      }
      Sc d = work.at(col, col).reciprocal();
      for (std::size_t j = 0; j < dim_; ++j) {
        work.at(col, j) *= d;
        inv.at(col, j) *= d;
      }
      for (std::size_t i = 0; i < dim_; ++i) {
        if (i == col) continue;
        Sc f = work.at(i, col);
        if (f == Sc(0)) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
          work.at(i, j) -= f * work.at(col, j);
          inv.at(i, j) -= f * inv.at(col, j);
        }
      }
    }
    return inv;
  }

  MatrixAlgebra inverse() const {
    auto inv = try_inverse();
    require(inv.has_value(), Errc::singular, "matrix is singular");
    return *inv;
  }

  friend bool operator==(const MatrixAlgebra& x, const MatrixAlgebra& y) {
    return x.dim_ == y.dim_ && x.a_ == y.a_;
  }
  friend bool operator!=(const MatrixAlgebra& x, const MatrixAlgebra& y) { return !(x == y); }

 private:
  std::size_t dim_;
  std::vector<Sc> a_;  // row major
};

template <class Sc>
Sc sup_dist(const MatrixAlgebra<Sc>& a, const MatrixAlgebra<Sc>& b) {
  return (a - b).norm();
}

}  // namespace powerfact

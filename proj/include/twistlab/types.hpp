#pragma once

/*! @file types.hpp
    @brief Scalar/vector aliases, the extended-real value type and small
           dense-matrix helpers shared by all modules. */

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace twistlab {

using Real = double;

template <class S> using Vec2T = Eigen::Matrix<S, 2, 1>;
template <class S> using Mat2T = Eigen::Matrix<S, 2, 2>;

using Vec2 = Vec2T<Real>;
using Mat2 = Mat2T<Real>;
using VecX = Eigen::VectorXd;
using Mat2X = Eigen::Matrix2Xd;

//// Extended real with an explicit infinity tag.  The barrier value h(s<=0)
//// is represented by this tag, never by a floating-point overflow, so that
//// feasibility logic can branch on it explicitly.
struct ExtReal {
  Real value = 0;
  bool infinite = false;

  static ExtReal finite(Real v) { return {v, false}; }
  static ExtReal infinity() { return {0, true}; }

  bool is_finite() const { return !infinite; }

  /// Finite value, or +inf as a plain double (for printing/comparisons).
  Real as_double() const {
    return infinite ? std::numeric_limits<Real>::infinity() : value;
  }

  ExtReal &operator+=(const ExtReal &o) {
    infinite = infinite || o.infinite;
    if (!infinite) value += o.value;
    return *this;
  }
  ExtReal &operator+=(Real v) {
    if (!infinite) value += v;
    return *this;
  }
};

inline ExtReal operator+(ExtReal a, const ExtReal &b) { return a += b; }

/// adj A for 2x2 A: adj(A) A = det(A) I.
template <class Derived>
Mat2T<typename Derived::Scalar> adj2(const Eigen::MatrixBase<Derived> &A) {
  using S = typename Derived::Scalar;
  Mat2T<S> out;
  out << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  return out;
}

/// cof A = (adj A)^T.
template <class Derived>
Mat2T<typename Derived::Scalar> cof2(const Eigen::MatrixBase<Derived> &A) {
  return adj2(A).transpose();
}

}  // namespace twistlab

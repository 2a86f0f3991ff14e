#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace feasib {

/// Dense real coordinate vector. Every iterate, center and normal is one.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad arguments: dimension mismatch, non-finite entries, broken invariants.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation the body cannot provide (e.g. a linear oracle over a halfspace).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Throws InvalidInput unless every entry of `v` is finite.
void require_finite(const Vector& v, const std::string& what);

/// Throws InvalidInput unless `a` and `b` have the same length.
void require_same_dimension(const Vector& a, const Vector& b, const std::string& what);

/// Infinity norm of a - b.
double max_abs_diff(const Vector& a, const Vector& b);

}  // namespace feasib

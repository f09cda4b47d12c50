#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace flmc {

// Every cost, penalty and flow amount in this library is a non-negative
// 64-bit integer.  Money and Units are separate aliases purely for
// readability; both alias int64_t.
using Money = std::int64_t;
using Units = std::int64_t;
using Index = Eigen::Index;

// Matrices are laid out facility-row by client-column.
using CostMatrix = Eigen::Matrix<Money, Eigen::Dynamic, Eigen::Dynamic>;
using FlowMatrix = Eigen::Matrix<Units, Eigen::Dynamic, Eigen::Dynamic>;
using MoneyVector = Eigen::Matrix<Money, Eigen::Dynamic, 1>;
using UnitsVector = Eigen::Matrix<Units, Eigen::Dynamic, 1>;

// Arithmetic that could leave the representable range throws instead of
// silently wrapping.
inline Money checked_add(Money a, Money b) {
  Money r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in addition");
  }
  return r;
}

inline Money checked_mul(Money a, Money b) {
  Money r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in multiplication");
  }
  return r;
}

template <typename Derived>
Money checked_sum(const Eigen::MatrixBase<Derived>& v) {
  Money total = 0;
  for (Index i = 0; i < v.size(); ++i) {
    total = checked_add(total, v(i));
  }
  return total;
}

}  // namespace flmc

#pragma once

#include <span>
#include <vector>

#include "isopair/lazy_op.hpp"

namespace isopair {

/// Result of one structural check over a window of basis vectors. Basis
/// actions are exact, so a deviation is an exact statement about every
/// tested index; `certified` records that the operator declared a band
/// radius, which makes a pass extend to the relations on the inner window.
struct WindowCheck {
  std::string name;
  double max_deviation = 0.0;
  bool certified = false;
  bool pass(double tol = 1e-13) const { return max_deviation <= tol; }
};

/// Checks for a single operator: isometry, unitarity, adjoint consistency.
std::vector<WindowCheck> window_checks(const LazyOp& v, std::span<const BasisIndex> window);

/// Checks for a pair: per-operator isometry and adjoint consistency plus
/// commutation V1 V2 e = V2 V1 e and double commutation V1 V2* e = V2* V1 e.
std::vector<WindowCheck> window_checks(const LazyOp& v1, const LazyOp& v2,
                                       std::span<const BasisIndex> window);

double max_check_deviation(const std::vector<WindowCheck>& checks);
const WindowCheck& find_check(const std::vector<WindowCheck>& checks, const std::string& name);

double isometry_deviation(const LazyOp& v, std::span<const BasisIndex> window);
double coisometry_deviation(const LazyOp& v, std::span<const BasisIndex> window);
double adjoint_consistency_deviation(const LazyOp& v, std::span<const BasisIndex> window);
double commutation_deviation(const LazyOp& a, const LazyOp& b, std::span<const BasisIndex> window);
double double_commutation_deviation(const LazyOp& a, const LazyOp& b,
                                    std::span<const BasisIndex> window);

}  // namespace isopair

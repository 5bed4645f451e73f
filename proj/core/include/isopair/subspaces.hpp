#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "isopair/lazy_op.hpp"

namespace isopair {

/// Orthonormal basis of {v in span(window) : op(v) = 0}, found through an
/// SVD of the exact rectangular compression.  Singular values below
/// tol * sigma_max * max(rows, cols) count as zero.
std::vector<SparseVec> window_nullspace(const LazyOp& op, std::span<const BasisIndex> window,
                                        double tol = 1e-10);

/// Orthonormal basis of span(vs) (SVD rank decision at tol).
std::vector<SparseVec> orthonormalize(const std::vector<SparseVec>& vs, double tol = 1e-10);

/// Numerical rank with the same threshold policy.
int numerical_rank(const Eigen::MatrixXcd& m, double tol = 1e-10);

/// Component of x orthogonal to span(onb); onb must be orthonormal.
SparseVec orthogonal_residual(const SparseVec& x, const std::vector<SparseVec>& onb);

/// max over basis vectors a of ||a - P_span(b) a||; 0 iff span(a) <= span(b).
double subspace_inclusion_deviation(const std::vector<SparseVec>& a,
                                    const std::vector<SparseVec>& b);

/// Window compression of the orthogonal projection onto span(onb).
Eigen::MatrixXcd projection_matrix(const std::vector<SparseVec>& onb,
                                   std::span<const BasisIndex> window);

/// Gram matrix G(i, j) = <v_i, v_j>.
Eigen::MatrixXcd gram_matrix(const std::vector<SparseVec>& vs);

/// Vectors of the family whose support lies inside the window span.
std::vector<SparseVec> restrict_to_window(const std::vector<SparseVec>& vs,
                                          std::span<const BasisIndex> window);

std::vector<SparseVec> apply_to_family(const LazyOp& op, const std::vector<SparseVec>& vs);

}  // namespace isopair

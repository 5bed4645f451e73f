#pragma once

#include "isopair/sparse_vec.hpp"

namespace isopair {

/// Named analytic vectors, truncated with certified geometric tail bounds.
struct AnalyticVectorSpec {
  enum class Name { KernelK, XNeg, XPos, H2, OrthoGenG };
  Name name;
  Cplx l1{0.0, 0.0};
  Cplx l2{0.0, 0.0};
  int m = 0;  // OrthoGenG only
  double target_eps = 1e-12;
};

SparseVec analytic_vector(const AnalyticVectorSpec& spec);

/// Szego kernel k_lambda = sum_n conj(lambda)^n z^n on H2(D).
SparseVec hardy_kernel(Cplx lambda, double eps);
SparseVec hardy_kernel_truncated(Cplx lambda, int max_grade);

/// Product kernel k_{w1} (x) k_{w2} on H2(D^2).
SparseVec bidisc_kernel(Cplx w1, Cplx w2, double eps);

/// Joint eigenvector of the multipliers of the (l2(Z), p_-, omega) triple at
/// parameter (l1, l2):
///   sum_{n>=0} l1^n e_n + (1/l1) sum_{n>=1} l2^{n-1} e_{-n},
/// with the closed forms at l1 = 0 and/or l2 = 0 selected automatically.
SparseVec x_neg_vector(Cplx l1, Cplx l2, double eps);
SparseVec x_neg_vector_truncated(Cplx l1, Cplx l2, int max_grade);

/// Adjoint joint eigenvector for the (l2(Z), p_{0+}, omega) triple:
///   sum_{n>=0} conj(l2)^n e_n + (1/conj(l2)) sum_{n>=1} conj(l1)^{n-1} e_{-n},
/// with the l1 = 0 / l2 = 0 closed forms selected automatically.
SparseVec x_pos_vector(Cplx l1, Cplx l2, double eps);
SparseVec x_pos_vector_truncated(Cplx l1, Cplx l2, int max_grade);

/// Stage-2 witness 1/((1 - conj(l2) z1^2 z2)(1 - l1 z1)) on H2(D^2), kept as
/// the box {l1^m conj(l2)^n z1^(m+2n) z2^n : m, n <= series_cap}.
SparseVec stage2_witness(Cplx l1, Cplx l2, int series_cap);
double stage2_witness_tail(Cplx l1, Cplx l2, int series_cap);
SparseVec stage2_witness_eps(Cplx l1, Cplx l2, double eps);

/// g_m = sum_n conj(l2)^n z1^(m+2n) z2^n; distinct m give exactly orthogonal
/// vectors (the exponent classes (m+2n, n) are disjoint).
SparseVec range_orthogonal_generator(Cplx l2, int m, double eps);

}  // namespace isopair

#pragma once

#include <optional>

#include "isopair/bcl.hpp"
#include "isopair/subspaces.hpp"

namespace isopair::defect {

/// I - V1 V1* - V2 V2* + V V* with V = V1 V2, as a lazy operator.
LazyOp defect_op(const LazyOp& V1, const LazyOp& V2);

struct DefectReport {
  int window_grade = 0;
  std::vector<BasisIndex> window;
  Eigen::MatrixXcd matrix;
  std::vector<double> eigenvalues;  // ascending
  double hermiticity_deviation = 0.0;
  double boundary_ring_max = 0.0;
  bcl::DefectTag tag = bcl::DefectTag::Mixed;
  bool support_certified = false;
  std::vector<SparseVec> ker_v1, ker_v2, ker_v;  // orthonormal, within the window
};

/// Exact window compression of the defect with sign classification, boundary
/// certification and the kernel bases of V1*, V2*, (V1 V2)*.
DefectReport defect_window_matrix(const LazyOp& V1, const LazyOp& V2, int window_grade);

struct ProjectionIdentityReport {
  int window_grade = 0;
  bool kernels_stabilized = false;
  /// Entrywise gap between the direct defect matrix and the two
  /// projection-difference forms, on the window.
  double deviation_form1 = 0.0;  // P_{ker V1*} - P_{V2(ker V1*)}
  double deviation_form2 = 0.0;  // P_{ker V2*} - P_{V1(ker V2*)}
  int dim_ker_v1 = 0, dim_ker_v2 = 0, dim_ker_v = 0;
  int dim_v1_ker_v2 = 0, dim_v2_ker_v1 = 0;
  /// dim ker V1* + dim V1(ker V2*) = dim ker V* = dim ker V2* + dim V2(ker V1*),
  /// all within the window.
  bool dims_consistent = false;
};

ProjectionIdentityReport verify_projection_identities(const LazyOp& V1, const LazyOp& V2,
                                                      int window_grade);

struct FringeReport {
  /// F1 = P_{ker V1*} V2 on ker V1*, F2 = P_{ker V2*} V1 on ker V2*.
  /// Columns run over the kernel basis within the window; rows over the
  /// kernel basis of an enlarged window so nothing escapes.
  Eigen::MatrixXcd f1, f2;
  double f1_isometry_dev = 0.0, f2_isometry_dev = 0.0;
  double f1_adjoint_isometry_dev = 0.0, f2_adjoint_isometry_dev = 0.0;
  double f1_max_abs = 0.0, f2_max_abs = 0.0;
  bool kernels_stabilized = false;
  /// Zero <=> both unitary; Positive <=> isometries, not unitary;
  /// Negative <=> adjoints isometries, not unitary; OffDiagonal <=> both zero.
  bcl::DefectTag classification = bcl::DefectTag::Mixed;
};

FringeReport fringe_matrices(const LazyOp& V1, const LazyOp& V2, int window_grade);

struct WoldReport {
  int window_grade = 0;
  int window_size = 0;
  /// layers[n] = orthonormal family spanning V^n(ker V*), kept while it stays
  /// inside the window.
  std::vector<std::vector<SparseVec>> layers;
  int family_size = 0;
  int residual_dim = 0;  // window size minus family size; reported, not classified
  double orthonormality_deviation = 0.0;
};

WoldReport wold(const LazyOp& V, int window_grade);

struct LadderItem {
  std::string id;
  bool holds = false;
  double deviation = 0.0;
};

struct ClassLadder {
  bcl::DefectTag ladder;
  std::vector<LadderItem> items;
  bool all_true = false;
  bool all_false = false;
};

struct LadderReport {
  bcl::DefectTag detected = bcl::DefectTag::Mixed;
  std::vector<ClassLadder> ladders;
  /// The detected class's ladder holds in full and every other ladder fails
  /// in full; Mixed demands all four ladders fail.
  bool consistent = false;
  std::string offending;  // first inconsistent item, empty when consistent
};

/// Evaluates the equivalence ladders of all four sign classes and checks
/// they agree with the detected class.  Items that need the BCL triple use
/// the given one, or the Sarkar triple when it is exact on the window.
LadderReport equivalence_suite(const LazyOp& V1, const LazyOp& V2, int window_grade,
                               const std::optional<bcl::BclTriple>& triple = std::nullopt);

}  // namespace isopair::defect

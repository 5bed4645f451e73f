#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "isopair/lazy_op.hpp"

namespace isopair::bcl {

enum class DefectTag { Zero, Positive, Negative, OffDiagonal, Mixed };
std::string to_string(DefectTag t);

/// Sign class of the defect with the eigenvalue evidence behind it.
struct DefectClass {
  DefectTag tag = DefectTag::Mixed;
  std::vector<double> evidence;  // eigenvalues of the windowed U*PU - P, ascending
  bool support_certified = false;
};

struct FiniteTriple {
  Eigen::MatrixXcd U, P;
  int dim() const { return static_cast<int>(U.rows()); }
};

struct LazyTriple {
  LazyOp U, P;
  int band_radius = 1;
  std::string name;
};

/// (E, P, U): a Hilbert space E with a projection P and a unitary U.  Either
/// finite-dimensional matrices or banded lazy operators on l2(Z); generates a
/// commuting isometric pair through its multipliers.
class BclTriple {
 public:
  BclTriple() = default;  // empty; fill through the factories

  /// Validates: U unitary, P hermitian idempotent, both to 1e-12.
  static BclTriple finite(Eigen::MatrixXcd U, Eigen::MatrixXcd P);
  /// As `finite` but without the validity check; for windowed compressions
  /// whose deviation is reported alongside (see sarkar_triple).
  static BclTriple finite_unchecked(Eigen::MatrixXcd U, Eigen::MatrixXcd P);
  /// "bilateral_p_minus": (l2(Z), projection onto span{e_n : n < 0}, shift).
  /// "bilateral_p_zero_plus": (l2(Z), projection onto span{e_n : n >= 0}, shift).
  static BclTriple preset(const std::string& name);
  static bool is_preset_name(const std::string& name);

  bool is_finite() const { return finite_.has_value(); }
  const FiniteTriple& finite_part() const;
  const LazyTriple& lazy_part() const;
  const std::string& name() const { return name_; }

  /// Scheme of H^2_D(E), the space the multiplier pair acts on.
  IndexScheme multiplier_scheme() const;
  /// Scheme of the fiber E for lazy triples.
  IndexScheme fiber_scheme() const;

 private:
  std::optional<FiniteTriple> finite_;
  std::optional<LazyTriple> lazy_;
  std::string name_;
};

/// Max deviation of U from unitary and P from a hermitian idempotent.
double triple_validation_deviation(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& P);

/// phi1(z) = U*(P_perp + z P),  phi2(z) = (P + z P_perp) U.
Eigen::MatrixXcd phi1(const FiniteTriple& t, Cplx z);
Eigen::MatrixXcd phi2(const FiniteTriple& t, Cplx z);
LazyOp phi1(const LazyTriple& t, Cplx z);
LazyOp phi2(const LazyTriple& t, Cplx z);

/// The commuting isometric pair (M_phi1, M_phi2) on H^2_D(E).
std::pair<LazyOp, LazyOp> multiplier_pair(const BclTriple& t);

/// Fiber defect D = U*PU - P as an operator on E.
Eigen::MatrixXcd fiber_defect(const FiniteTriple& t);
LazyOp fiber_defect(const LazyTriple& t);

/// E0 (x) (U*PU - P) on H^2_D(E).
LazyOp triple_defect_op(const BclTriple& t);

/// Window compression of E0 (x) (U*PU - P).
Eigen::MatrixXcd defect_from_triple(const BclTriple& t, std::span<const BasisIndex> window);

/// Sign classification of U*PU - P.  For lazy triples the evidence is the
/// compression to the bilateral window of the given grade, and
/// support_certified reports that a ring of width band_radius beyond the
/// detected support vanishes to 1e-13.
DefectClass classify(const BclTriple& t, int window_grade = 8);

/// Classification thresholds shared across the library.
inline constexpr double kEigenvalueSignThreshold = 1e-10;
inline constexpr double kExactZeroThreshold = 1e-13;
inline constexpr double kIdentityTolerance = 1e-12;

/// Sign classification from hermitian evidence eigenvalues alone (no
/// off-diagonal detection; used where only a matrix is available).
DefectTag classify_eigenvalues(const std::vector<double>& eigs,
                               double threshold = kEigenvalueSignThreshold);

struct SarkarResult {
  BclTriple triple;
  /// Orthonormal basis of ker V* within the window that the triple's
  /// matrices are written in (ker V1* part first, then V1(ker V2*)).
  std::vector<SparseVec> kernel_basis;
  int dim_ker_v1 = 0;
  bool stabilized = false;
  /// Deviation of the compressed U0 from unitary; nonzero when ker V* sticks
  /// out of the window (infinite-dimensional kernels compress with an edge).
  double unitary_deviation = 0.0;
  std::string note;
};

/// Concrete BCL triple of a commuting isometric pair: E = ker V*, P the
/// projection onto V2(ker V1*), U0 = V2 on ker V1* plus V1* on V1(ker V2*).
SarkarResult sarkar_triple(const LazyOp& V1, const LazyOp& V2, int window_grade);

}  // namespace isopair::bcl

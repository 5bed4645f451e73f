#pragma once

#include "isopair/analytic_vectors.hpp"
#include "isopair/models.hpp"

namespace isopair::koszul {

/// Rank analysis of the Koszul complex
///   0 -> H -> H (+) H -> H -> 0,  d1 h = (A h, B h),  d2 (h1, h2) = A h2 - B h1
/// for the shifted pair (A - l1, B - l2) of commuting matrices.
struct KoszulReport {
  Cplx l1{0.0, 0.0}, l2{0.0, 0.0};
  int dim = 0;
  int rank_d1 = 0, rank_d2 = 0;
  int dim_ker_d1 = 0;
  bool exact1 = false, exact2 = false, exact3 = false;
  std::vector<int> break_stages;  // stages where exactness fails
  double rank_tolerance = 0.0;
  double commutator_norm = 0.0;
  bool nonsingular() const { return exact1 && exact2 && exact3; }
  bool in_spectrum() const { return !break_stages.empty(); }
};

KoszulReport koszul_finite(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Cplx l1, Cplx l2,
                           double tol = 1e-9);

/// Taylor spectrum of a commuting matrix pair: the aligned diagonal pairs of
/// a simultaneous triangularization, computed by iterated common-eigenvector
/// deflation and deduplicated to the given radius.  Deterministic.
std::vector<std::pair<Cplx, Cplx>> joint_spectrum_finite(const Eigen::MatrixXcd& A,
                                                         const Eigen::MatrixXcd& B,
                                                         double tol = 1e-9, double dedup = 1e-8);

struct PhiSpectrumResult {
  std::vector<std::pair<Cplx, Cplx>> points;
  std::vector<KoszulReport> reports;  // one per point
};

/// sigma(phi1(z), phi2(z)) for a finite triple, with per-point rank reports.
PhiSpectrumResult phi_spectrum(const bcl::BclTriple& t, Cplx z, double tol = 1e-9);

enum class Certificate { Rank, EigvecForward, EigvecAdjoint, RangePairing };
std::string to_string(Certificate c);

/// One scan verdict.  break_stages records the stages witnessed by the
/// certificate: a forward eigenvector breaks stage 1, an adjoint eigenvector
/// stage 3, a range pairing stage 2; rank certificates carry every broken
/// stage of the finite report.
struct SpectrumSample {
  bool has_z = false;
  Cplx z{0.0, 0.0};
  Cplx l1{0.0, 0.0}, l2{0.0, 0.0};
  bool in_spectrum = false;
  std::vector<int> break_stages;
  Certificate certificate = Certificate::Rank;
  double residual = 0.0;
};

/// Forward joint eigenvector certificate for the psi fiber pair at z = l1 l2.
SpectrumSample psi_forward_certificate(Cplx l1, Cplx l2, double eps = 1e-12);
/// Adjoint joint eigenvector certificate for the eta fiber pair at z = l1 l2.
SpectrumSample eta_adjoint_certificate(Cplx l1, Cplx l2, double eps = 1e-12);
/// Adjoint (kernel-vector) certificate for the bidisc coordinate pair.
SpectrumSample pos_adjoint_certificate(Cplx w1, Cplx w2, double eps = 1e-12);

/// Stage-2 break certificate for the negative fundamental pair at (l1, l2):
/// the witness h2 lies in the orthocomplement of ran(tau2 - l2) and
/// (tau1 - l1) h2 pairs to zero with every generator of that orthocomplement.
struct Stage2Report {
  Cplx l1{0.0, 0.0}, l2{0.0, 0.0};
  int series_cap = 0;
  int generator_count = 0;
  bool pattern_ok = false;
  double pattern_deviation = 0.0;
  std::vector<double> pairings;  // |<(tau1 - l1) h2, g_m>|, m = 0..generator_count
  double max_pairing = 0.0;
  double pairing_bound = 0.0;  // certified bound from the truncation tails
  double residue_deviation = 0.0;
  double tail_bound = 0.0;
  double tail_threshold = 0.0;
  bool tail_ok = false;
  bool certified() const { return pattern_ok && tail_ok && max_pairing <= pairing_bound; }
};

Stage2Report stage2_certificate_neg(Cplx l1, Cplx l2, int series_cap, int generator_count,
                                    double tail_threshold = 1e-12);
SpectrumSample stage2_sample(const Stage2Report& rep);

struct GridSpec {
  int radial = 12;
  int angular = 12;
  double radius_scale = 1.0;
};

/// radii (k + 1/2)/radial * radius_scale, angles 2 pi j / angular; row-major
/// over (radius, angle).
std::vector<Cplx> polar_grid(const GridSpec& g);
/// Deterministic sweep of n points filling radius_scale * D.
std::vector<Cplx> lambda_sweep(int n, double radius_scale = 0.9);
/// Covering radius of the grid inside the closed disc (numerical).
double grid_covering_radius(const std::vector<Cplx>& grid);

struct ScanConfig {
  GridSpec zgrid{12, 12, 1.0};
  int lgrid = 24;
  double lambda_radius = 0.9;
  double tol_rank = 1e-9;
  double tol_residual = 1e-10;
  double dedup = 1e-8;
  double eps = 1e-12;
  int stage2_generators = 8;
};

struct ScanSummary {
  std::string subject;
  std::string subject_description;
  bcl::DefectTag cls = bcl::DefectTag::Mixed;
  std::string predicted;
  /// max over grid z of the symmetric Hausdorff gap between the computed
  /// per-z spectrum and the class formula (finite subjects only).
  double per_z_hausdorff = 0.0;
  /// one-sided gaps between the sampled union and the predicted set
  double pred_to_samples = 0.0;
  double samples_to_pred = 0.0;
  double grid_resolution = 0.0;
  std::string grid;
  double tol_rank = 0.0, tol_residual = 0.0, dedup = 0.0;
  int certified_in_spectrum = 0;
  int not_certified = 0;
};

struct ScanResult {
  std::vector<SpectrumSample> samples;
  ScanSummary summary;
};

ScanResult scan_triple(const bcl::BclTriple& t, const ScanConfig& cfg,
                       const std::string& subject_name);
ScanResult scan_model(const models::ModelPair& m, const ScanConfig& cfg);

}  // namespace isopair::koszul

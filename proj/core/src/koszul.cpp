#include "isopair/koszul.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isopair/subspaces.hpp"

namespace isopair::koszul {

using bcl::DefectTag;

namespace {

double rank_threshold(const Eigen::VectorXd& sv, Eigen::Index rows, Eigen::Index cols,
                      double tol) {
  double smax = sv.size() ? sv(0) : 0.0;
  return tol * smax * static_cast<double>(std::max(rows, cols));
}

int rank_with_tol(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double thr = rank_threshold(svd.singularValues(), m.rows(), m.cols(), tol);
  int r = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > thr) ++r;
  return r;
}

}  // namespace

KoszulReport koszul_finite(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Cplx l1, Cplx l2,
                           double tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("koszul_finite: need square matrices of equal size");
  const auto d = A.rows();
  double scale = std::max(A.norm(), B.norm());
  double comm = (A * B - B * A).norm();
  if (comm > tol * std::max(1.0, scale))
    throw std::invalid_argument("koszul_finite: inputs do not commute (||[A,B]|| = " +
                                std::to_string(comm) + ")");
  Eigen::MatrixXcd As = A - l1 * Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd Bs = B - l2 * Eigen::MatrixXcd::Identity(d, d);

  Eigen::MatrixXcd d1(2 * d, d);
  d1.topRows(d) = As;
  d1.bottomRows(d) = Bs;
  Eigen::MatrixXcd d2(d, 2 * d);
  d2.leftCols(d) = -Bs;
  d2.rightCols(d) = As;

  KoszulReport rep;
  rep.l1 = l1;
  rep.l2 = l2;
  rep.dim = static_cast<int>(d);
  rep.rank_tolerance = tol;
  rep.commutator_norm = comm;
  rep.rank_d1 = rank_with_tol(d1, tol);
  rep.rank_d2 = rank_with_tol(d2, tol);
  rep.dim_ker_d1 = rep.dim - rep.rank_d1;
  rep.exact1 = rep.rank_d1 == rep.dim;
  rep.exact3 = rep.rank_d2 == rep.dim;
  rep.exact2 = rep.rank_d2 == rep.dim + rep.dim_ker_d1;
  if (!rep.exact1) rep.break_stages.push_back(1);
  if (!rep.exact2) rep.break_stages.push_back(2);
  if (!rep.exact3) rep.break_stages.push_back(3);
  return rep;
}

std::vector<std::pair<Cplx, Cplx>> joint_spectrum_finite(const Eigen::MatrixXcd& A,
                                                         const Eigen::MatrixXcd& B, double tol,
                                                         double dedup) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("joint_spectrum_finite: need square matrices of equal size");
  double scale = std::max({A.norm(), B.norm(), 1.0});
  if ((A * B - B * A).norm() > tol * scale)
    throw std::invalid_argument("joint_spectrum_finite: inputs do not commute");

  Eigen::MatrixXcd A0 = A, B0 = B;
  std::vector<std::pair<Cplx, Cplx>> diag;
  while (A0.rows() > 0) {
    const auto k = A0.rows();
    // eigenvalue of A0 with a deterministic choice
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A0, false);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("joint_spectrum_finite: eigen decomposition failed");
    Eigen::Index pick = 0;
    for (Eigen::Index i = 1; i < k; ++i) {
      Cplx a = es.eigenvalues()(i), b = es.eigenvalues()(pick);
      if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) pick = i;
    }
    Cplx alpha = es.eigenvalues()(pick);
    // eigenspace of A0 at alpha; the threshold is anchored to the unshifted
    // matrix so a numerically-zero shift still counts as a full nullspace
    Eigen::MatrixXcd shifted = A0 - alpha * Eigen::MatrixXcd::Identity(k, k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    double anchor = std::max({svd.singularValues()(0), A0.norm(), 1e-300});
    double thr = std::max(tol, 1e-12) * anchor * static_cast<double>(k);
    Eigen::Index null_dim = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (svd.singularValues()(i) <= thr) ++null_dim;
    if (null_dim == 0) null_dim = 1;  // smallest singular vector as fallback
    Eigen::MatrixXcd S = svd.matrixV().rightCols(null_dim);
    // common eigenvector: eigenvector of B0 restricted to the eigenspace
    Eigen::MatrixXcd Br = S.adjoint() * B0 * S;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esb(Br, true);
    if (esb.info() != Eigen::Success)
      throw std::runtime_error("joint_spectrum_finite: eigen decomposition failed");
    Eigen::Index pb = 0;
    for (Eigen::Index i = 1; i < Br.rows(); ++i) {
      Cplx a = esb.eigenvalues()(i), b = esb.eigenvalues()(pb);
      if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) pb = i;
    }
    Eigen::VectorXcd v = S * esb.eigenvectors().col(pb);
    v.normalize();
    Cplx a_val = v.adjoint() * A0 * v;
    Cplx b_val = v.adjoint() * B0 * v;
    double res = std::max((A0 * v - a_val * v).norm(), (B0 * v - b_val * v).norm());
    if (res > 1e-6 * scale)
      throw std::runtime_error("joint_spectrum_finite: deflation failure, residual " +
                               std::to_string(res));
    diag.emplace_back(a_val, b_val);
    if (k == 1) break;
    // unitary with first column v, then drop the first row and column
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(k, k);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    Q = qr.householderQ();
    // householderQ yields first column v up to phase; fix the phase
    Cplx ph = Q.col(0).adjoint() * v;
    Q.col(0) *= ph;
    Eigen::MatrixXcd A1 = Q.adjoint() * A0 * Q;
    Eigen::MatrixXcd B1 = Q.adjoint() * B0 * Q;
    A0 = A1.bottomRightCorner(k - 1, k - 1);
    B0 = B1.bottomRightCorner(k - 1, k - 1);
  }

  std::sort(diag.begin(), diag.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    if (x.first.imag() != y.first.imag()) return x.first.imag() < y.first.imag();
    if (x.second.real() != y.second.real()) return x.second.real() < y.second.real();
    return x.second.imag() < y.second.imag();
  });
  std::vector<std::pair<Cplx, Cplx>> out;
  for (const auto& p : diag) {
    bool dup = false;
    for (const auto& q : out) {
      if (std::abs(p.first - q.first) <= dedup && std::abs(p.second - q.second) <= dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  return out;
}

PhiSpectrumResult phi_spectrum(const bcl::BclTriple& t, Cplx z, double tol) {
  const auto& f = t.finite_part();
  Eigen::MatrixXcd A = bcl::phi1(f, z), B = bcl::phi2(f, z);
  PhiSpectrumResult res;
  res.points = joint_spectrum_finite(A, B, tol);
  for (const auto& [l1, l2] : res.points) res.reports.push_back(koszul_finite(A, B, l1, l2, tol));
  return res;
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::Rank: return "rank";
    case Certificate::EigvecForward: return "eigvec_forward";
    case Certificate::EigvecAdjoint: return "eigvec_adjoint";
    case Certificate::RangePairing: return "range_pairing";
  }
  return "?";
}

namespace {

double eigen_residual(const LazyOp& op, const SparseVec& x, Cplx value, bool adjoint_side) {
  SparseVec img = adjoint_side ? apply_adjoint(op, x) : apply(op, x);
  img.axpy(-value, x);
  return img.norm();
}

}  // namespace

SpectrumSample psi_forward_certificate(Cplx l1, Cplx l2, double eps) {
  Cplx z = l1 * l2;
  bcl::BclTriple t = bcl::BclTriple::preset("bilateral_p_minus");
  const auto& lt = t.lazy_part();
  LazyOp p1 = bcl::phi1(lt, z), p2 = bcl::phi2(lt, z);
  SparseVec x = x_neg_vector(l1, l2, eps);
  double r1 = eigen_residual(p1, x, l1, false);
  double r2 = eigen_residual(p2, x, l2, false);
  SpectrumSample s;
  s.has_z = true;
  s.z = z;
  s.l1 = l1;
  s.l2 = l2;
  s.residual = std::max(r1, r2);
  s.certificate = Certificate::EigvecForward;
  s.in_spectrum = s.residual <= 2.0 * x.tail_bound() + 1e-14;
  if (s.in_spectrum) s.break_stages = {1};
  return s;
}

SpectrumSample eta_adjoint_certificate(Cplx l1, Cplx l2, double eps) {
  Cplx z = l1 * l2;
  bcl::BclTriple t = bcl::BclTriple::preset("bilateral_p_zero_plus");
  const auto& lt = t.lazy_part();
  LazyOp p1 = bcl::phi1(lt, z), p2 = bcl::phi2(lt, z);
  SparseVec x = x_pos_vector(l1, l2, eps);
  double r1 = eigen_residual(p1, x, std::conj(l1), true);
  double r2 = eigen_residual(p2, x, std::conj(l2), true);
  SpectrumSample s;
  s.has_z = true;
  s.z = z;
  s.l1 = l1;
  s.l2 = l2;
  s.residual = std::max(r1, r2);
  s.certificate = Certificate::EigvecAdjoint;
  s.in_spectrum = s.residual <= 2.0 * x.tail_bound() + 1e-14;
  if (s.in_spectrum) s.break_stages = {3};
  return s;
}

SpectrumSample pos_adjoint_certificate(Cplx w1, Cplx w2, double eps) {
  models::ModelPair m = models::pos_pair();
  SparseVec k = bidisc_kernel(w1, w2, eps);
  double r1 = eigen_residual(m.V1, k, std::conj(w1), true);
  double r2 = eigen_residual(m.V2, k, std::conj(w2), true);
  SpectrumSample s;
  s.l1 = w1;
  s.l2 = w2;
  s.residual = std::max(r1, r2);
  s.certificate = Certificate::EigvecAdjoint;
  s.in_spectrum = s.residual <= 2.0 * k.tail_bound() + 1e-14;
  if (s.in_spectrum) s.break_stages = {3};
  return s;
}

Stage2Report stage2_certificate_neg(Cplx l1, Cplx l2, int series_cap, int generator_count,
                                    double tail_threshold) {
  Stage2Report rep;
  rep.l1 = l1;
  rep.l2 = l2;
  rep.series_cap = series_cap;
  rep.generator_count = generator_count;
  rep.tail_threshold = tail_threshold;

  SparseVec h = stage2_witness(l1, l2, series_cap);
  rep.tail_bound = h.tail_bound();
  rep.tail_ok = rep.tail_bound <= tail_threshold;

  // witness coefficients must match l1^m conj(l2)^n at (m + 2n, n) on the
  // graded window of the cap
  {
    IndexScheme s = IndexScheme::hardy_bidisc();
    double dev = 0.0;
    std::vector<BasisIndex> win = s.window(series_cap);
    std::map<BasisIndex, Cplx> expected;
    Cplx cm(1.0, 0.0);
    for (int m = 0; m <= series_cap; ++m) {
      Cplx c = cm;
      for (int n = 0; 3 * n + m <= series_cap; ++n) {
        expected[BasisIndex({m + 2 * n, n})] = c;
        c *= std::conj(l2);
      }
      cm *= l1;
    }
    for (const auto& i : win) {
      auto it = expected.find(i);
      Cplx want = it == expected.end() ? Cplx(0.0, 0.0) : it->second;
      dev = std::max(dev, std::abs(h.coeff(i) - want));
    }
    rep.pattern_deviation = dev;
    rep.pattern_ok = dev == 0.0;
  }

  models::ModelPair neg = models::neg_pair();
  SparseVec r = apply(neg.V1, h);
  r.axpy(-l1, h);

  double g_norm_max = 0.0, g_tail_max = 0.0;
  const double g_eps = 1e-16;
  rep.pairings.clear();
  for (int m = 0; m <= generator_count; ++m) {
    SparseVec g = range_orthogonal_generator(l2, m, g_eps);
    g_norm_max = std::max(g_norm_max, g.norm());
    g_tail_max = std::max(g_tail_max, g.tail_bound());
    rep.pairings.push_back(std::abs(inner(r, g)));
  }
  rep.max_pairing =
      rep.pairings.empty() ? 0.0 : *std::max_element(rep.pairings.begin(), rep.pairings.end());
  rep.pairing_bound = 2.0 * rep.tail_bound * g_norm_max + g_tail_max * (r.norm() + 1.0);

  // independent residue check: (M_z1* - l1) h against sum conj(l2)^n z1^(2n-1) z2^n
  {
    IndexScheme s = IndexScheme::hardy_bidisc();
    LazyOp mz1 = models::pos_pair().V1;
    SparseVec res = apply_adjoint(mz1, h);
    res.axpy(-l1, h);
    SparseVec expected(s);
    Cplx c = std::conj(l2);
    for (int n = 1; n <= series_cap; ++n) {
      expected.set(BasisIndex({2 * n - 1, n}), c);
      c *= std::conj(l2);
    }
    double dev = 0.0;
    for (const auto& [i, v] : res.entries())
      if (s.grade(i) <= series_cap) dev = std::max(dev, std::abs(v - expected.coeff(i)));
    for (const auto& [i, v] : expected.entries())
      if (s.grade(i) <= series_cap) dev = std::max(dev, std::abs(res.coeff(i) - v));
    rep.residue_deviation = dev;
  }
  return rep;
}

SpectrumSample stage2_sample(const Stage2Report& rep) {
  SpectrumSample s;
  s.has_z = true;
  s.z = rep.l1 * rep.l2;
  s.l1 = rep.l1;
  s.l2 = rep.l2;
  s.certificate = Certificate::RangePairing;
  s.residual = rep.max_pairing;
  s.in_spectrum = rep.certified();
  if (s.in_spectrum) s.break_stages = {2};
  return s;
}

std::vector<Cplx> polar_grid(const GridSpec& g) {
  std::vector<Cplx> out;
  out.reserve(static_cast<size_t>(g.radial) * static_cast<size_t>(g.angular));
  for (int k = 0; k < g.radial; ++k) {
    double r = g.radius_scale * (k + 0.5) / g.radial;
    for (int j = 0; j < g.angular; ++j) {
      double th = 2.0 * std::numbers::pi * j / g.angular;
      out.push_back(Cplx(r * std::cos(th), r * std::sin(th)));
    }
  }
  return out;
}

std::vector<Cplx> lambda_sweep(int n, double radius_scale) {
  std::vector<Cplx> out;
  out.reserve(static_cast<size_t>(n));
  const double golden = 0.6180339887498949;
  for (int k = 0; k < n; ++k) {
    double r = radius_scale * std::sqrt((k + 0.5) / n);
    double th = 2.0 * std::numbers::pi * golden * k;
    out.push_back(Cplx(r * std::cos(th), r * std::sin(th)));
  }
  return out;
}

double grid_covering_radius(const std::vector<Cplx>& grid) {
  if (grid.empty()) return 1.0;
  double worst = 0.0;
  const int nr = 61, na = 120;
  for (int k = 0; k < nr; ++k) {
    double r = static_cast<double>(k) / (nr - 1);
    for (int j = 0; j < na; ++j) {
      double th = 2.0 * std::numbers::pi * j / na;
      Cplx p(r * std::cos(th), r * std::sin(th));
      double best = std::numeric_limits<double>::infinity();
      for (const Cplx& g : grid) best = std::min(best, std::abs(p - g));
      worst = std::max(worst, best);
    }
  }
  // net discretization slack
  return worst + std::hypot(0.5 / (nr - 1), std::numbers::pi / na);
}

namespace {

struct PredictedSet {
  DefectTag cls = DefectTag::Mixed;
  std::vector<Cplx> u1_spectrum, u2_spectrum;  // zero class branches
  std::vector<Cplx> w_spectrum;                // offdiagonal: sigma(U1 U2)
  bool u1_branch = false, u2_branch = false;
  bool bidisc = false;  // predicted set is the closed bidisc
  std::string descriptor;
};

std::vector<Cplx> matrix_eigenvalues(const Eigen::MatrixXcd& m) {
  std::vector<Cplx> out;
  if (m.rows() == 0) return out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](Cplx a, Cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::string format_points(const std::vector<Cplx>& pts) {
  std::string s = "{";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ", ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g%+.4gi", pts[i].real(), pts[i].imag());
    s += buf;
  }
  return s + "}";
}

PredictedSet predicted_for_finite_triple(const bcl::BclTriple& t) {
  const auto& f = t.finite_part();
  PredictedSet ps;
  ps.cls = bcl::classify(t).tag;
  const auto d = f.U.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((f.P + f.P.adjoint()) / 2.0);
  std::vector<Eigen::Index> in_p, in_pperp;
  for (Eigen::Index i = 0; i < d; ++i)
    (es.eigenvalues()(i) > 0.5 ? in_p : in_pperp).push_back(i);
  Eigen::MatrixXcd bp(d, static_cast<Eigen::Index>(in_p.size()));
  Eigen::MatrixXcd bq(d, static_cast<Eigen::Index>(in_pperp.size()));
  for (size_t i = 0; i < in_p.size(); ++i) bp.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(in_p[i]);
  for (size_t i = 0; i < in_pperp.size(); ++i)
    bq.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(in_pperp[i]);
  if (ps.cls == DefectTag::Zero) {
    ps.u1_spectrum = matrix_eigenvalues(Eigen::MatrixXcd(bp.adjoint() * f.U * bp));
    ps.u2_spectrum = matrix_eigenvalues(Eigen::MatrixXcd(bq.adjoint() * f.U * bq));
    ps.u1_branch = !ps.u1_spectrum.empty();
    ps.u2_branch = !ps.u2_spectrum.empty();
    ps.descriptor = "cl(D) x sigma(U1) u sigma(U2*) x cl(D); sigma(U1) = " +
                    format_points(ps.u1_spectrum) + ", sigma(U2) = " +
                    format_points(ps.u2_spectrum);
  } else if (ps.cls == DefectTag::OffDiagonal) {
    ps.w_spectrum = matrix_eigenvalues(Eigen::MatrixXcd(bp.adjoint() * f.U * f.U * bp));
    ps.descriptor = "{z (1, a) : z in cl(D), a in sigma(U1U2)}; sigma(U1U2) = " +
                    format_points(ps.w_spectrum);
  } else {
    ps.descriptor = "no closed-form prediction for class " + bcl::to_string(ps.cls);
  }
  return ps;
}

std::vector<std::pair<Cplx, Cplx>> predicted_points_at_z(const PredictedSet& ps, Cplx z) {
  std::vector<std::pair<Cplx, Cplx>> out;
  if (ps.cls == DefectTag::Zero) {
    if (ps.u1_branch)
      for (Cplx u : ps.u1_spectrum) out.emplace_back(z * std::conj(u), u);
    if (ps.u2_branch)
      for (Cplx v : ps.u2_spectrum) out.emplace_back(std::conj(v), z * v);
  } else if (ps.cls == DefectTag::OffDiagonal) {
    Cplx w = std::sqrt(z);
    for (Cplx a : ps.w_spectrum) {
      Cplx b = std::sqrt(a);  // principal; sign flip handled by +-
      out.emplace_back(w * std::conj(b), w * b);
      out.emplace_back(-w * std::conj(b), -w * b);
    }
  }
  return out;
}

double pair_dist(const std::pair<Cplx, Cplx>& a, const std::pair<Cplx, Cplx>& b) {
  return std::hypot(std::abs(a.first - b.first), std::abs(a.second - b.second));
}

double hausdorff_symmetric(const std::vector<std::pair<Cplx, Cplx>>& a,
                           const std::vector<std::pair<Cplx, Cplx>>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, pair_dist(x, y));
    h = std::max(h, best);
  }
  for (const auto& y : b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a) best = std::min(best, pair_dist(x, y));
    h = std::max(h, best);
  }
  return h;
}

// exact distance from a sample to the predicted set
double dist_to_predicted(const PredictedSet& ps, Cplx l1, Cplx l2) {
  auto dist_branch_u1 = [&](Cplx u) {
    double d1 = std::max(0.0, std::abs(l1) - 1.0);
    return std::hypot(d1, std::abs(l2 - u));
  };
  auto dist_branch_u2 = [&](Cplx v) {
    double d2 = std::max(0.0, std::abs(l2) - 1.0);
    return std::hypot(std::abs(l1 - std::conj(v)), d2);
  };
  double best = std::numeric_limits<double>::infinity();
  if (ps.cls == DefectTag::Zero) {
    if (ps.u1_branch)
      for (Cplx u : ps.u1_spectrum) best = std::min(best, dist_branch_u1(u));
    if (ps.u2_branch)
      for (Cplx v : ps.u2_spectrum) best = std::min(best, dist_branch_u2(v));
    return best;
  }
  if (ps.cls == DefectTag::OffDiagonal) {
    for (Cplx a : ps.w_spectrum) {
      Cplx zstar = (l1 + std::conj(a) * l2) / 2.0;
      if (std::abs(zstar) > 1.0) zstar /= std::abs(zstar);
      best = std::min(best, std::hypot(std::abs(l1 - zstar), std::abs(l2 - zstar * a)));
    }
    return best;
  }
  if (ps.bidisc) {
    double d1 = std::max(0.0, std::abs(l1) - 1.0);
    double d2 = std::max(0.0, std::abs(l2) - 1.0);
    return std::hypot(d1, d2);
  }
  return 0.0;
}

// one-sided gap from a fine net of the predicted set to the samples, plus
// the net's own covering slack
double pred_to_samples_gap(const PredictedSet& ps,
                           const std::vector<std::pair<Cplx, Cplx>>& samples) {
  if (samples.empty()) return std::numeric_limits<double>::infinity();
  const int nr = 41, na = 72;
  double net_cov = std::hypot(0.5 / (nr - 1), std::numbers::pi / na);
  auto nearest = [&](const std::pair<Cplx, Cplx>& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::min(best, pair_dist(p, s));
    return best;
  };
  double worst = 0.0;
  auto run_net = [&](const std::function<std::pair<Cplx, Cplx>(Cplx)>& embed, double lip) {
    for (int k = 0; k < nr; ++k) {
      double r = static_cast<double>(k) / (nr - 1);
      for (int j = 0; j < na; ++j) {
        double th = 2.0 * std::numbers::pi * j / na;
        Cplx w(r * std::cos(th), r * std::sin(th));
        worst = std::max(worst, nearest(embed(w)) ); // net slack added once below
        (void)lip;
      }
    }
  };
  double lip_max = 1.0;
  if (ps.cls == DefectTag::Zero) {
    if (ps.u1_branch)
      for (Cplx u : ps.u1_spectrum)
        run_net([u](Cplx w) { return std::make_pair(w, u); }, 1.0);
    if (ps.u2_branch)
      for (Cplx v : ps.u2_spectrum)
        run_net([v](Cplx w) { return std::make_pair(std::conj(v), w); }, 1.0);
  } else if (ps.cls == DefectTag::OffDiagonal) {
    lip_max = std::numbers::sqrt2;
    for (Cplx a : ps.w_spectrum)
      run_net([a](Cplx w) { return std::make_pair(w, w * a); }, lip_max);
  } else if (ps.bidisc) {
    // product net over the closed bidisc, coarser per factor
    const int m = 17;
    std::vector<Cplx> net1;
    for (int k = 0; k < m; ++k) {
      double r = static_cast<double>(k) / (m - 1);
      for (int j = 0; j < 2 * m; ++j) {
        double th = 2.0 * std::numbers::pi * j / (2 * m);
        net1.push_back(Cplx(r * std::cos(th), r * std::sin(th)));
      }
    }
    double cov1 = std::hypot(0.5 / (m - 1), std::numbers::pi / (2 * m));
    for (const Cplx& x : net1)
      for (const Cplx& y : net1) worst = std::max(worst, nearest({x, y}));
    return worst + std::numbers::sqrt2 * cov1;
  }
  return worst + lip_max * net_cov;
}

}  // namespace

ScanResult scan_triple(const bcl::BclTriple& t, const ScanConfig& cfg,
                       const std::string& subject_name) {
  if (!t.is_finite())
    throw std::invalid_argument("scan_triple: lazy presets scan through their models");
  const auto& f = t.finite_part();
  PredictedSet ps = predicted_for_finite_triple(t);
  bool class_formula = ps.cls == DefectTag::Zero || ps.cls == DefectTag::OffDiagonal;

  ScanResult res;
  res.summary.subject = subject_name;
  res.summary.subject_description = "finite BCL triple, d = " + std::to_string(f.dim());
  res.summary.cls = ps.cls;
  res.summary.predicted = ps.descriptor;
  res.summary.tol_rank = cfg.tol_rank;
  res.summary.tol_residual = cfg.tol_residual;
  res.summary.dedup = cfg.dedup;
  res.summary.grid = std::to_string(cfg.zgrid.radial) + "x" + std::to_string(cfg.zgrid.angular) +
                     " polar z-grid";
  std::vector<Cplx> grid = polar_grid(cfg.zgrid);
  res.summary.grid_resolution = grid_covering_radius(grid);

  std::vector<std::pair<Cplx, Cplx>> all_points;
  double per_z = 0.0;
  for (const Cplx& z : grid) {
    Eigen::MatrixXcd A = bcl::phi1(f, z), B = bcl::phi2(f, z);
    PhiSpectrumResult sp = phi_spectrum(t, z, cfg.tol_rank);
    if (class_formula)
      per_z = std::max(per_z, hausdorff_symmetric(sp.points, predicted_points_at_z(ps, z)));
    for (size_t k = 0; k < sp.points.size(); ++k) {
      const auto& [l1, l2] = sp.points[k];
      SpectrumSample s;
      s.has_z = true;
      s.z = z;
      s.l1 = l1;
      s.l2 = l2;
      s.in_spectrum = true;
      if (class_formula) {
        // class theory certificate: adjoint joint eigenvector, stage-3 break
        Eigen::MatrixXcd stacked(2 * f.dim(), f.dim());
        stacked.topRows(f.dim()) = (A - l1 * Eigen::MatrixXcd::Identity(f.dim(), f.dim())).adjoint();
        stacked.bottomRows(f.dim()) =
            (B - l2 * Eigen::MatrixXcd::Identity(f.dim(), f.dim())).adjoint();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
        double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
        s.residual = sigma_min;
        if (sigma_min <= cfg.tol_residual) {
          s.certificate = Certificate::EigvecAdjoint;
          s.break_stages = {3};
        } else {
          s.certificate = Certificate::Rank;
          s.break_stages = sp.reports[k].break_stages;
        }
      } else {
        s.certificate = Certificate::Rank;
        s.break_stages = sp.reports[k].break_stages;
        s.residual = 0.0;
      }
      res.samples.push_back(s);
      all_points.push_back(sp.points[k]);
    }
  }
  res.summary.per_z_hausdorff = per_z;
  for (const auto& s : res.samples)
    (s.in_spectrum ? res.summary.certified_in_spectrum : res.summary.not_certified)++;
  if (class_formula) {
    double s2p = 0.0;
    for (const auto& p : all_points) s2p = std::max(s2p, dist_to_predicted(ps, p.first, p.second));
    res.summary.samples_to_pred = s2p;
    res.summary.pred_to_samples = pred_to_samples_gap(ps, all_points);
  }
  return res;
}

ScanResult scan_model(const models::ModelPair& m, const ScanConfig& cfg) {
  ScanResult res;
  res.summary.subject = m.name;
  res.summary.subject_description = m.description;
  res.summary.cls = m.declared_class;
  res.summary.tol_rank = cfg.tol_rank;
  res.summary.tol_residual = cfg.tol_residual;
  res.summary.dedup = cfg.dedup;

  auto lambda_grid_scan = [&](const std::function<SpectrumSample(Cplx, Cplx)>& cert,
                              const std::string& predicted) {
    res.summary.predicted = predicted;
    res.summary.grid = std::to_string(cfg.lgrid) + "x" + std::to_string(cfg.lgrid) +
                       " lambda sweep, radius " + std::to_string(cfg.lambda_radius);
    std::vector<Cplx> sweep = lambda_sweep(cfg.lgrid, cfg.lambda_radius);
    PredictedSet ps;
    ps.bidisc = true;
    std::vector<std::pair<Cplx, Cplx>> pts;
    for (const Cplx& a : sweep) {
      for (const Cplx& b : sweep) {
        SpectrumSample s = cert(a, b);
        res.samples.push_back(s);
        if (s.in_spectrum) pts.emplace_back(s.l1, s.l2);
      }
    }
    double s2p = 0.0;
    for (const auto& p : pts) s2p = std::max(s2p, dist_to_predicted(ps, p.first, p.second));
    res.summary.samples_to_pred = s2p;
    res.summary.pred_to_samples = pred_to_samples_gap(ps, pts);
    // covering radius of the sweep grid inside the bidisc
    double cov1 = grid_covering_radius(sweep);
    res.summary.grid_resolution = std::numbers::sqrt2 * cov1;
  };

  if (m.name == "psi" || m.name == "neg") {
    if (m.name == "psi") {
      lambda_grid_scan([&](Cplx a, Cplx b) { return psi_forward_certificate(a, b, cfg.eps); },
                       "closed bidisc (forward eigenvectors of the fiber pair)");
    } else {
      lambda_grid_scan(
          [&](Cplx a, Cplx b) {
            int cap = 8;
            while (stage2_witness_tail(a, b, cap) > cfg.tol_residual && cap < 4000) cap += 8;
            Stage2Report rep =
                stage2_certificate_neg(a, b, cap, cfg.stage2_generators, cfg.tol_residual);
            return stage2_sample(rep);
          },
          "closed bidisc (stage-2 range pairings)");
    }
  } else if (m.name == "eta") {
    lambda_grid_scan([&](Cplx a, Cplx b) { return eta_adjoint_certificate(a, b, cfg.eps); },
                     "closed bidisc (adjoint eigenvectors of the fiber pair)");
  } else if (m.name == "pos") {
    lambda_grid_scan([&](Cplx a, Cplx b) { return pos_adjoint_certificate(a, b, cfg.eps); },
                     "closed bidisc (adjoint kernel eigenvectors)");
  } else if (m.name == "zero" || m.name == "zero_twisted" || m.name == "offdiag") {
    bool off = m.name == "offdiag";
    // read W off the second operator: I (x) W, or M_z (x) W for equal ranges
    const int d = m.scheme.mult();
    Eigen::MatrixXcd W(d, d);
    for (int t = 0; t < d; ++t) {
      SparseVec img = m.V2.forward(m.scheme.join_mult(BasisIndex({0}), t));
      for (int s = 0; s < d; ++s)
        W(s, t) = img.coeff(m.scheme.join_mult(BasisIndex({off ? 1 : 0}), s));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(W, true);
    std::vector<std::pair<Cplx, Eigen::VectorXcd>> eigenpairs;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      eigenpairs.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));
    std::sort(eigenpairs.begin(), eigenpairs.end(), [](const auto& a, const auto& b) {
      return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                              : a.first.imag() < b.first.imag();
    });
    std::vector<Cplx> alphas;
    for (const auto& [a, v] : eigenpairs) alphas.push_back(a);

    PredictedSet ps;
    if (off) {
      ps.cls = DefectTag::OffDiagonal;
      ps.w_spectrum = alphas;
      ps.descriptor = "{z (1, a) : z in cl(D), a in sigma(W)}; sigma(W) = " +
                      format_points(alphas);
    } else {
      ps.cls = DefectTag::Zero;
      ps.u1_branch = true;
      ps.u1_spectrum = alphas;
      ps.descriptor = "cl(D) x sigma(W) (V2 unitary); sigma(W) = " + format_points(alphas);
    }
    res.summary.predicted = ps.descriptor;
    res.summary.grid = std::to_string(cfg.zgrid.radial) + "x" +
                       std::to_string(cfg.zgrid.angular) + " polar z-grid";
    std::vector<Cplx> grid = polar_grid(cfg.zgrid);
    res.summary.grid_resolution = grid_covering_radius(grid);
    bool twisted = m.name == "zero_twisted";
    std::vector<std::pair<Cplx, Cplx>> pts;
    for (const Cplx& z : grid) {
      for (const auto& [alpha, v] : eigenpairs) {
        // the twisted first leg is M_z (x) W*, whose adjoint eigenvalue on
        // k_z (x) v_alpha picks up a conj(alpha) twist
        Cplx l1 = twisted ? z * std::conj(alpha) : z;
        Cplx l2 = off ? z * alpha : alpha;
        // adjoint eigenvector k_z (x) v
        SparseVec x(m.scheme);
        SparseVec k = hardy_kernel(z, cfg.eps);
        for (const auto& [ki, kc] : k.entries()) {
          for (int r = 0; r < v.size(); ++r) {
            Cplx c = kc * v(r);
            if (c != Cplx(0.0, 0.0))
              x.add_term(m.scheme.join_mult(BasisIndex({ki[0]}), r), c);
          }
        }
        x.set_tail_bound(k.tail_bound());
        double r1 = eigen_residual(m.V1, x, std::conj(l1), true);
        double r2 = eigen_residual(m.V2, x, std::conj(l2), true);
        SpectrumSample s;
        s.has_z = true;
        s.z = z;
        s.l1 = l1;
        s.l2 = l2;
        s.certificate = Certificate::EigvecAdjoint;
        s.residual = std::max(r1, r2);
        s.in_spectrum = s.residual <= 2.0 * x.tail_bound() + 1e-12;
        if (s.in_spectrum) s.break_stages = {3};
        res.samples.push_back(s);
        if (s.in_spectrum) pts.emplace_back(l1, l2);
      }
    }
    double s2p = 0.0;
    for (const auto& p : pts) s2p = std::max(s2p, dist_to_predicted(ps, p.first, p.second));
    res.summary.samples_to_pred = s2p;
    res.summary.pred_to_samples = pred_to_samples_gap(ps, pts);
  } else {
    throw std::invalid_argument("scan not supported for subject '" + m.name +
                                "'; supported: pos, neg, psi, eta, zero, zero_twisted, offdiag, "
                                "and finite triples");
  }
  for (const auto& s : res.samples)
    (s.in_spectrum ? res.summary.certified_in_spectrum : res.summary.not_certified)++;
  return res;
}

}  // namespace isopair::koszul

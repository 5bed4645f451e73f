// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  argv[1] optionally names the CLI binary (used by the
// determinism criterion).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "isopair/io.hpp"
#include "isopair/verify.hpp"

using namespace isopair;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::string g_cli_path;

void run_criterion(int number, const std::string& what, const std::function<bool()>& fn) {
  auto t0 = Clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] criterion %2d (%6.2fs): %s%s%s\n", ok ? "PASS" : "FAIL", number, secs,
              what.c_str(), error.empty() ? "" : " -- ", error.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool suite_passes(const verify::SuiteResult& r) {
  if (r.all_pass()) return true;
  for (const auto& a : r.assertions)
    if (!a.pass) std::printf("       failed: %s (value %.3e)\n", a.id.c_str(), a.value);
  return false;
}

// ---- criterion 1: three defect computations agree entrywise
bool criterion_identities() {
  return suite_passes(verify::identities_suite(8, rng::kDefaultSeed, 50, 8));
}

// ---- criterion 2: fundamental defect matrices with exact signs
bool criterion_fundamental_defects() {
  bool ok = true;
  auto check_eigs = [&](const defect::DefectReport& rep, std::vector<double> want) {
    std::vector<double> nonzero;
    for (double e : rep.eigenvalues)
      if (std::abs(e) > 1e-13) nonzero.push_back(e);
    if (nonzero.size() != want.size()) return false;
    for (size_t k = 0; k < want.size(); ++k)
      if (std::abs(nonzero[k] - want[k]) > 1e-13) return false;
    return true;
  };
  models::ModelPair pos = models::pos_pair();
  defect::DefectReport rp = defect::defect_window_matrix(pos.V1, pos.V2, 6);
  ok = ok && check_eigs(rp, {1.0}) && rp.tag == bcl::DefectTag::Positive;
  // the +1 eigenvector is the constant: matrix = E_{(0,0)} exactly
  ok = ok && std::abs(rp.matrix(0, 0) - Cplx(1.0, 0.0)) <= 1e-13;
  models::ModelPair neg = models::neg_pair();
  defect::DefectReport rn = defect::defect_window_matrix(neg.V1, neg.V2, 6);
  ok = ok && check_eigs(rn, {-1.0}) && rn.tag == bcl::DefectTag::Negative;
  ok = ok && std::abs(rn.matrix(2, 2) + Cplx(1.0, 0.0)) <= 1e-13;  // -E_{z2}
  models::ModelPair off = models::offdiag_pair(models::default_unitary());
  defect::DefectReport ro = defect::defect_window_matrix(off.V1, off.V2, 6);
  ok = ok && check_eigs(ro, {-1.0, -1.0, 1.0, 1.0}) && ro.tag == bcl::DefectTag::OffDiagonal;
  // entrywise E0 (x) I - E1 (x) I: +1 on the two grade-0 slots, -1 on the
  // two grade-1 slots, zero elsewhere
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(ro.matrix.rows(), ro.matrix.cols());
  want(0, 0) = want(1, 1) = Cplx(1.0, 0.0);
  want(2, 2) = want(3, 3) = Cplx(-1.0, 0.0);
  ok = ok && (ro.matrix - want).cwiseAbs().maxCoeff() <= 1e-13;
  return ok;
}

// ---- criterion 3: lemma ladders
bool criterion_ladders() { return suite_passes(verify::ladders_suite(8, rng::kDefaultSeed, 50)); }

// ---- criterion 4: intertwiners
bool criterion_intertwiners() { return suite_passes(verify::intertwiners_suite(8)); }

// ---- criterion 5: koszul oracle + reducing-spectrum properties
bool criterion_koszul_oracle() {
  return suite_passes(verify::koszul_oracle_suite(rng::kDefaultSeed, 200, 6, 1e-9, 50));
}

// ---- criterion 6: off-diagonal spectrum formula, sigma(W) = {1, i}
bool criterion_offdiag_formula() {
  Eigen::MatrixXcd w = models::default_unitary();  // diag(1, i)
  const int d = 2;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  u.block(0, d, d, d) = Eigen::MatrixXcd::Identity(d, d);
  u.block(d, 0, d, d) = w;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  p.block(0, 0, d, d) = Eigen::MatrixXcd::Identity(d, d);
  bcl::BclTriple t = bcl::BclTriple::finite(u, p);
  koszul::ScanConfig cfg;
  koszul::ScanResult res = koszul::scan_triple(t, cfg, "offdiag-swap");
  bool ok = res.summary.per_z_hausdorff <= 1e-8;
  ok = ok && res.summary.pred_to_samples <= 2.0 * res.summary.grid_resolution;
  ok = ok && res.summary.samples_to_pred <= 1e-8;
  for (const auto& s : res.samples) {
    ok = ok && s.in_spectrum && s.break_stages == std::vector<int>{3} &&
         s.certificate == koszul::Certificate::EigvecAdjoint;
  }
  if (!ok)
    std::printf("       per_z %.3e, pred->s %.3e vs 2*res %.3e, s->pred %.3e\n",
                res.summary.per_z_hausdorff, res.summary.pred_to_samples,
                2.0 * res.summary.grid_resolution, res.summary.samples_to_pred);
  return ok;
}

// ---- criterion 7: zero-class spectrum formula, two eigenvalues per branch
bool criterion_zero_formula() {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4), p = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = Cplx(1.0, 0.0);
  u(1, 1) = Cplx(0.0, 1.0);
  u(2, 2) = std::polar(1.0, 0.25 * 3.14159265358979323846);
  u(3, 3) = Cplx(-1.0, 0.0);
  p(0, 0) = p(1, 1) = 1.0;
  bcl::BclTriple t = bcl::BclTriple::finite(u, p);
  koszul::ScanConfig cfg;
  koszul::ScanResult res = koszul::scan_triple(t, cfg, "zero-block");
  bool ok = res.summary.per_z_hausdorff <= 1e-8;
  for (const auto& s : res.samples)
    ok = ok && s.in_spectrum && s.break_stages == std::vector<int>{3};
  if (!ok) std::printf("       per_z %.3e\n", res.summary.per_z_hausdorff);
  return ok;
}

// ---- criterion 8: eigenvector certificates on 100 sampled parameter pairs
bool criterion_certificates() {
  std::mt19937_64 gen(rng::kDefaultSeed);
  auto draw = [&gen]() {
    while (true) {
      double re = 2.0 * (static_cast<double>(gen() >> 11) / 9007199254740992.0) - 1.0;
      double im = 2.0 * (static_cast<double>(gen() >> 11) / 9007199254740992.0) - 1.0;
      Cplx z(0.9 * re, 0.9 * im);
      if (std::abs(z) <= 0.9 && std::abs(z) > 1e-3) return z;
    }
  };
  for (int k = 0; k < 100; ++k) {
    Cplx l1 = draw(), l2 = draw();
    koszul::SpectrumSample a = koszul::psi_forward_certificate(l1, l2, 1e-12);
    koszul::SpectrumSample b = koszul::eta_adjoint_certificate(l1, l2, 1e-12);
    koszul::SpectrumSample c = koszul::pos_adjoint_certificate(l1, l2, 1e-12);
    for (const auto& s : {a, b, c}) {
      if (!s.in_spectrum || s.residual > 1e-10) {
        std::printf("       residual %.3e at (%g%+gi, %g%+gi)\n", s.residual, l1.real(),
                    l1.imag(), l2.real(), l2.imag());
        return false;
      }
    }
  }
  return true;
}

// ---- criterion 9: stage-2 certificate at (0.3, 0.5i), cap 40, m <= 20
bool criterion_stage2() {
  koszul::Stage2Report rep =
      koszul::stage2_certificate_neg(Cplx(0.3, 0.0), Cplx(0.0, 0.5), 40, 20, 1e-12);
  bool ok = rep.tail_ok && rep.pattern_ok && rep.pattern_deviation == 0.0;
  ok = ok && rep.max_pairing <= 1e-10;
  if (!ok)
    std::printf("       tail %.3e pattern %.3e max pairing %.3e\n", rep.tail_bound,
                rep.pattern_deviation, rep.max_pairing);
  return ok;
}

// ---- criterion 10: sign-flip embedding
bool criterion_embedding() { return suite_passes(verify::embedding_suite(4)); }

// ---- criterion 11: byte-identical outputs of verify and scan
bool criterion_determinism() {
  if (g_cli_path.empty()) {
    std::printf("       no CLI path given\n");
    return false;
  }
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args, const std::string& out) {
    std::string cmd = g_cli_path + " " + args + " --out " + out + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool ok = true;
  ok = ok && run("verify koszul-oracle --count 40", "/tmp/isopair_det_v1.json");
  ok = ok && run("verify koszul-oracle --count 40", "/tmp/isopair_det_v2.json");
  std::string v1 = slurp("/tmp/isopair_det_v1.json"), v2 = slurp("/tmp/isopair_det_v2.json");
  ok = ok && !v1.empty() && v1 == v2;

  std::string scan_args = "scan --model offdiag --zgrid 8x8 --csv {CSV} --json {JSON}";
  for (int r = 1; r <= 2; ++r) {
    std::string a = scan_args;
    a.replace(a.find("{CSV}"), 5, "/tmp/isopair_det_s" + std::to_string(r) + ".csv");
    a.replace(a.find("{JSON}"), 6, "/tmp/isopair_det_s" + std::to_string(r) + ".json");
    std::string cmd = g_cli_path + " " + a + " >/dev/null 2>&1";
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  std::string c1 = slurp("/tmp/isopair_det_s1.csv"), c2 = slurp("/tmp/isopair_det_s2.csv");
  std::string j1 = slurp("/tmp/isopair_det_s1.json"), j2 = slurp("/tmp/isopair_det_s2.json");
  ok = ok && !c1.empty() && c1 == c2 && !j1.empty() && j1 == j2;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  run_criterion(1, "defect identities agree entrywise on models and 50 random triples",
                criterion_identities);
  run_criterion(2, "fundamental defects are exact rank-one signs / projection pairs",
                criterion_fundamental_defects);
  run_criterion(3, "equivalence ladders consistent on models and 50 triples per class",
                criterion_ladders);
  run_criterion(4, "intertwiners unitary and intertwining with deviation <= 1e-13",
                criterion_intertwiners);
  run_criterion(5, "koszul rank verdicts match the triangularization oracle (200 pairs)",
                criterion_koszul_oracle);
  run_criterion(6, "equal-range spectrum formula on a 12x12 z-grid, stage-3-only breaks",
                criterion_offdiag_formula);
  run_criterion(7, "zero-class spectrum formula per z, stage-3-only breaks",
                criterion_zero_formula);
  run_criterion(8, "100 sampled eigenvector certificates with residuals <= 1e-10",
                criterion_certificates);
  run_criterion(9, "stage-2 pairing certificate at (0.3, 0.5i), grade-40 truncation",
                criterion_stage2);
  run_criterion(10, "sign-flip embedding: orthonormal image, coordinate-pair compression",
                criterion_embedding);
  run_criterion(11, "verify and scan outputs are byte-identical across runs",
                criterion_determinism);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}

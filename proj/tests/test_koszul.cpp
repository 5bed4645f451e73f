#include <doctest.h>

#include "isopair/koszul.hpp"
#include "isopair/random_gen.hpp"

using namespace isopair;
using koszul::Certificate;

TEST_CASE("the zero pair in dimension one breaks everywhere") {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(1, 1);
  koszul::KoszulReport rep = koszul::koszul_finite(z, z, Cplx(0, 0), Cplx(0, 0));
  CHECK(rep.rank_d1 == 0);
  CHECK(rep.rank_d2 == 0);
  CHECK(!rep.exact1);
  CHECK(!rep.exact3);
  CHECK(rep.in_spectrum());
  // stages 1 and 3 break; in finite dimensions stage 2 cannot survive either
  CHECK(rep.break_stages == std::vector<int>{1, 2, 3});
  // and a resolvent point is fully exact
  koszul::KoszulReport ok = koszul::koszul_finite(z, z, Cplx(1, 0), Cplx(1, 0));
  CHECK(ok.nonsingular());
}

TEST_CASE("diagonal pairs: aligned eigenvalues are singular, mixed ones are not") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = a;
  a(0, 0) = Cplx(0.3, 0.0);
  a(1, 1) = Cplx(-0.5, 0.2);
  b(0, 0) = Cplx(0.1, -0.4);
  b(1, 1) = Cplx(0.7, 0.0);
  CHECK(koszul::koszul_finite(a, b, a(0, 0), b(0, 0)).in_spectrum());
  CHECK(koszul::koszul_finite(a, b, a(1, 1), b(1, 1)).in_spectrum());
  CHECK(!koszul::koszul_finite(a, b, a(0, 0), b(1, 1)).in_spectrum());
  auto spec = koszul::joint_spectrum_finite(a, b);
  REQUIRE(spec.size() == 2);
}

TEST_CASE("non-commuting inputs are rejected") {
  Eigen::MatrixXcd a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 0, 0, 1, 0;
  CHECK_THROWS_AS(koszul::koszul_finite(a, b, Cplx(0, 0), Cplx(0, 0)), std::invalid_argument);
}

TEST_CASE("nilpotent pair spectrum is the origin") {
  Eigen::MatrixXcd j2(2, 2);
  j2 << 0, 1, 0, 0;
  auto spec = koszul::joint_spectrum_finite(j2, Eigen::MatrixXcd::Zero(2, 2));
  REQUIRE(spec.size() == 1);
  CHECK(std::abs(spec[0].first) <= 1e-10);
  CHECK(std::abs(spec[0].second) <= 1e-10);
}

TEST_CASE("swap-triple multipliers at z = 1/4 are singular exactly at (+-1/2, +-1/2)") {
  Eigen::MatrixXcd u(2, 2), p(2, 2);
  u << 0, 1, 1, 0;
  p << 1, 0, 0, 0;
  bcl::BclTriple t = bcl::BclTriple::finite(u, p);
  koszul::PhiSpectrumResult res = koszul::phi_spectrum(t, Cplx(0.25, 0.0), 1e-9);
  REQUIRE(res.points.size() == 2);
  CHECK(std::abs(res.points[0].first - Cplx(-0.5, 0.0)) <= 1e-10);
  CHECK(std::abs(res.points[0].second - Cplx(-0.5, 0.0)) <= 1e-10);
  CHECK(std::abs(res.points[1].first - Cplx(0.5, 0.0)) <= 1e-10);
  CHECK(std::abs(res.points[1].second - Cplx(0.5, 0.0)) <= 1e-10);
  // oracle: dense rank scan over a lambda grid finds no other singular points
  Eigen::MatrixXcd A = bcl::phi1(t.finite_part(), Cplx(0.25, 0.0));
  Eigen::MatrixXcd B = bcl::phi2(t.finite_part(), Cplx(0.25, 0.0));
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      Cplx l1(0.25 * i, 0.13 * j);
      Cplx l2 = l1;
      bool claimed = false;
      for (const auto& pt : res.points)
        if (std::abs(pt.first - l1) < 1e-6 && std::abs(pt.second - l2) < 1e-6) claimed = true;
      CHECK(koszul::koszul_finite(A, B, l1, l2).in_spectrum() == claimed);
    }
  }
}

TEST_CASE("zero-class block triple spectrum follows the two-branch formula") {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4), p = Eigen::MatrixXcd::Zero(4, 4);
  Cplx u1(1.0, 0.0), u2(0.0, 1.0), v1 = std::polar(1.0, 0.5), v2(-1.0, 0.0);
  u(0, 0) = u1;
  u(1, 1) = u2;
  u(2, 2) = v1;
  u(3, 3) = v2;
  p(0, 0) = p(1, 1) = 1.0;
  bcl::BclTriple t = bcl::BclTriple::finite(u, p);
  Cplx z(0.3, 0.0);
  koszul::PhiSpectrumResult res = koszul::phi_spectrum(t, z, 1e-9);
  std::vector<std::pair<Cplx, Cplx>> want = {{z * std::conj(u1), u1},
                                             {z * std::conj(u2), u2},
                                             {std::conj(v1), z * v1},
                                             {std::conj(v2), z * v2}};
  REQUIRE(res.points.size() == 4);
  for (const auto& w : want) {
    double best = 1e9;
    for (const auto& pt : res.points)
      best = std::min(best, std::hypot(std::abs(pt.first - w.first),
                                       std::abs(pt.second - w.second)));
    CHECK(best <= 1e-10);
  }
  // spectral mapping at every point
  for (const auto& pt : res.points) CHECK(std::abs(pt.first * pt.second - z) <= 1e-10);
}

TEST_CASE("spectral mapping pins every point of a z = 0 slice to the axes") {
  std::mt19937_64 gen(99);
  bcl::BclTriple t = rng::random_triple(4, gen);
  koszul::PhiSpectrumResult res = koszul::phi_spectrum(t, Cplx(0.0, 0.0), 1e-9);
  for (const auto& pt : res.points) CHECK(std::abs(pt.first * pt.second) <= 1e-10);
}

TEST_CASE("forward eigenvector certificates on the psi fiber pair") {
  koszul::SpectrumSample s = koszul::psi_forward_certificate(Cplx(0.5, 0.0), Cplx(0.2, 0.0));
  CHECK(s.in_spectrum);
  CHECK(s.certificate == Certificate::EigvecForward);
  CHECK(s.break_stages == std::vector<int>{1});
  CHECK(s.residual <= 1e-10);
  CHECK(std::abs(s.z - Cplx(0.1, 0.0)) == 0.0);
}

TEST_CASE("adjoint certificates: eta at the origin is exact") {
  koszul::SpectrumSample s = koszul::eta_adjoint_certificate(Cplx(0, 0), Cplx(0, 0));
  CHECK(s.in_spectrum);
  CHECK(s.residual == 0.0);
  CHECK(s.break_stages == std::vector<int>{3});
}

TEST_CASE("adjoint kernel certificate for the bidisc pair") {
  koszul::SpectrumSample s =
      koszul::pos_adjoint_certificate(Cplx(0.5, 0.0), Cplx(0.0, 0.25), 1e-12);
  CHECK(s.in_spectrum);
  CHECK(s.certificate == Certificate::EigvecAdjoint);
  CHECK(s.residual <= 1e-10);
}

TEST_CASE("stage-2 certificate at the origin: support disjointness") {
  koszul::Stage2Report rep = koszul::stage2_certificate_neg(Cplx(0, 0), Cplx(0, 0), 10, 8);
  CHECK(rep.pattern_ok);
  CHECK(rep.max_pairing == 0.0);
  CHECK(rep.tail_ok);
}

TEST_CASE("stage-2 certificate at (0.3, 0.5i) with cap 40") {
  koszul::Stage2Report rep =
      koszul::stage2_certificate_neg(Cplx(0.3, 0.0), Cplx(0.0, 0.5), 40, 20);
  CHECK(rep.tail_ok);
  CHECK(rep.pattern_ok);
  CHECK(rep.max_pairing <= 1e-10);
  CHECK(rep.max_pairing <= rep.pairing_bound);
  CHECK(rep.residue_deviation <= 1e-12);
  CHECK(koszul::stage2_sample(rep).break_stages == std::vector<int>{2});
}

TEST_CASE("stage-2 certificate flags an insufficient truncation at (0.9, 0.9)") {
  koszul::Stage2Report rep =
      koszul::stage2_certificate_neg(Cplx(0.9, 0.0), Cplx(0.9, 0.0), 40, 5);
  CHECK(!rep.tail_ok);
  CHECK(rep.tail_bound > 1e-12);
}

TEST_CASE("random commuting pairs: oracle and rank verdicts agree") {
  std::mt19937_64 gen(7);
  for (int k = 0; k < 25; ++k) {
    int d = 2 + static_cast<int>(gen() % 5ull);
    auto [a, b] = rng::random_commuting_pair(d, gen);
    auto spec = koszul::joint_spectrum_finite(a, b, 1e-9);
    CHECK(static_cast<int>(spec.size()) <= d);
    for (const auto& [l1, l2] : spec)
      CHECK(koszul::koszul_finite(a, b, l1, l2, 1e-9).in_spectrum());
  }
}

TEST_CASE("normal tensor pairs reproduce the Cartesian product") {
  std::mt19937_64 gen(13);
  Eigen::MatrixXcd t = rng::random_normal(2, gen), s = rng::random_normal(2, gen);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4), b = a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a.block(2 * i, 2 * j, 2, 2) = t(i, j) * Eigen::MatrixXcd::Identity(2, 2);
      if (i == j) b.block(2 * i, 2 * j, 2, 2) = s;
    }
  auto spec = koszul::joint_spectrum_finite(a, b, 1e-9);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> et(t, false), es(s, false);
  REQUIRE(spec.size() == 4);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) {
      double best = 1e9;
      for (const auto& pt : spec)
        best = std::min(best, std::hypot(std::abs(pt.first - et.eigenvalues()(i)),
                                         std::abs(pt.second - es.eigenvalues()(j))));
      CHECK(best <= 1e-7);
    }
}

TEST_CASE("triple scans certify stage-3 breaks and match the class formula") {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4), p = Eigen::MatrixXcd::Zero(4, 4);
  u.block(0, 2, 2, 2) = Eigen::MatrixXcd::Identity(2, 2);
  u(2, 0) = 1.0;
  u(3, 1) = Cplx(0.0, 1.0);
  p(0, 0) = p(1, 1) = 1.0;
  bcl::BclTriple t = bcl::BclTriple::finite(u, p);
  koszul::ScanConfig cfg;
  cfg.zgrid = {6, 6, 1.0};
  koszul::ScanResult res = koszul::scan_triple(t, cfg, "swap");
  CHECK(res.summary.cls == bcl::DefectTag::OffDiagonal);
  CHECK(res.summary.per_z_hausdorff <= 1e-10);
  CHECK(res.summary.samples_to_pred <= 1e-10);
  CHECK(res.summary.pred_to_samples <= 2.0 * res.summary.grid_resolution);
  CHECK(res.summary.not_certified == 0);
  REQUIRE(res.samples.size() == 6 * 6 * 4);
  for (const auto& s : res.samples) {
    CHECK(s.in_spectrum);
    CHECK(s.break_stages == std::vector<int>{3});
    CHECK(s.certificate == Certificate::EigvecAdjoint);
    // spectral mapping: l1 l2 = z at every sample
    CHECK(std::abs(s.l1 * s.l2 - s.z) <= 1e-10);
  }
}

TEST_CASE("model scans of the bilateral pairs certify a bidisc-filling grid") {
  koszul::ScanConfig cfg;
  cfg.lgrid = 6;
  koszul::ScanResult res = koszul::scan_model(models::eta_pair(), cfg);
  CHECK(res.summary.not_certified == 0);
  CHECK(res.summary.certified_in_spectrum == 36);
  CHECK(res.summary.samples_to_pred <= 1e-12);  // samples lie inside the bidisc
  for (const auto& s : res.samples) CHECK(std::abs(s.l1 * s.l2 - s.z) == 0.0);
}

TEST_CASE("grids are deterministic and inside the closed disc") {
  koszul::GridSpec g{12, 12, 1.0};
  auto grid = koszul::polar_grid(g);
  CHECK(grid.size() == 144);
  for (const Cplx& z : grid) CHECK(std::abs(z) < 1.0);
  CHECK(grid == koszul::polar_grid(g));
  auto sweep = koszul::lambda_sweep(24, 0.9);
  CHECK(sweep.size() == 24);
  for (const Cplx& z : sweep) CHECK(std::abs(z) <= 0.9 + 1e-15);
}

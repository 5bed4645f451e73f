#include <doctest.h>

#include "isopair/defect.hpp"
#include "isopair/models.hpp"
#include "isopair/random_gen.hpp"

using namespace isopair;
using bcl::DefectTag;

TEST_CASE("fundamental defect matrices have exact rank-one signs") {
  models::ModelPair pos = models::pos_pair();
  defect::DefectReport rp = defect::defect_window_matrix(pos.V1, pos.V2, 6);
  CHECK(rp.tag == DefectTag::Positive);
  CHECK(rp.eigenvalues.back() == 1.0);
  CHECK(rp.eigenvalues[rp.eigenvalues.size() - 2] == 0.0);
  // the +1 eigenvector is the constant direction
  CHECK(std::abs(rp.matrix(0, 0) - Cplx(1.0, 0.0)) == 0.0);

  models::ModelPair neg = models::neg_pair();
  defect::DefectReport rn = defect::defect_window_matrix(neg.V1, neg.V2, 6);
  CHECK(rn.tag == DefectTag::Negative);
  CHECK(rn.eigenvalues.front() == -1.0);
  // -1 sits at z2, which is the third window index (1, z1, z2, ...)
  CHECK(std::abs(rn.matrix(2, 2) - Cplx(-1.0, 0.0)) == 0.0);
  CHECK(rn.boundary_ring_max == 0.0);
  CHECK(rn.hermiticity_deviation == 0.0);
}

TEST_CASE("projection identities: bidisc pair dimension splits (N+1) + N") {
  models::ModelPair pos = models::pos_pair();
  for (int n : {4, 6}) {
    defect::ProjectionIdentityReport rep =
        defect::verify_projection_identities(pos.V1, pos.V2, n);
    CHECK(rep.kernels_stabilized);
    CHECK(rep.deviation_form1 <= 1e-12);
    CHECK(rep.deviation_form2 <= 1e-12);
    CHECK(rep.dim_ker_v == 2 * n + 1);
    CHECK(rep.dim_ker_v1 == n + 1);
    CHECK(rep.dim_v2_ker_v1 == n);
    CHECK(rep.dims_consistent);
  }
}

TEST_CASE("projection identities: negative pair recovers the z2-ladder kernel") {
  models::ModelPair neg = models::neg_pair();
  defect::ProjectionIdentityReport rep = defect::verify_projection_identities(neg.V1, neg.V2, 6);
  CHECK(rep.kernels_stabilized);
  CHECK(rep.deviation_form1 <= 1e-12);
  CHECK(rep.deviation_form2 <= 1e-12);
  CHECK(rep.dims_consistent);
  // ker tau1* within the window is span{z2^2, ..., z2^6}
  auto k1 = window_nullspace(adjoint(neg.V1), neg.scheme.window(6));
  REQUIRE(k1.size() == 5);
  std::vector<SparseVec> monomials;
  for (int b = 2; b <= 6; ++b)
    monomials.push_back(SparseVec::basis(neg.scheme, BasisIndex({0, b})));
  CHECK(subspace_inclusion_deviation(k1, monomials) <= 1e-13);
  CHECK(subspace_inclusion_deviation(monomials, k1) <= 1e-13);
}

TEST_CASE("a unitary second leg collapses the identities") {
  models::ModelPair zp = models::zero_pair(models::default_unitary());
  defect::ProjectionIdentityReport rep = defect::verify_projection_identities(zp.V1, zp.V2, 5);
  CHECK(rep.dim_ker_v2 == 0);
  CHECK(rep.deviation_form1 <= 1e-13);
  CHECK(rep.deviation_form2 <= 1e-13);
  Eigen::MatrixXcd c = compress(defect::defect_op(zp.V1, zp.V2), zp.scheme.window(5));
  CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fringe operators classify all four corners") {
  auto fr = [&](const models::ModelPair& m) { return defect::fringe_matrices(m.V1, m.V2, 6); };
  defect::FringeReport z = fr(models::zero_pair(models::default_unitary()));
  CHECK(z.classification == DefectTag::Zero);
  CHECK(z.f1_isometry_dev <= 1e-13);
  CHECK(z.f1_adjoint_isometry_dev <= 1e-13);

  defect::FringeReport p = fr(models::pos_pair());
  CHECK(p.classification == DefectTag::Positive);
  CHECK(p.f1_isometry_dev <= 1e-13);        // F1*F1 = I
  CHECK(p.f1_adjoint_isometry_dev > 0.5);   // F1 F1* != I

  defect::FringeReport n = fr(models::neg_pair());
  CHECK(n.classification == DefectTag::Negative);
  CHECK(n.f1_adjoint_isometry_dev <= 1e-13);
  CHECK(n.f1_isometry_dev > 0.5);

  defect::FringeReport o = fr(models::offdiag_pair(models::default_unitary()));
  CHECK(o.classification == DefectTag::OffDiagonal);
  CHECK(o.f1_max_abs == 0.0);
  CHECK(o.f2_max_abs == 0.0);
}

TEST_CASE("wold layers of the plain shift fill the window") {
  IndexScheme s = IndexScheme::hardy_disc();
  LazyOp mz(
      s, s, [s](const BasisIndex& i) { return SparseVec::basis(s, BasisIndex({i[0] + 1})); },
      [s](const BasisIndex& i) {
        return i[0] == 0 ? SparseVec(s) : SparseVec::basis(s, BasisIndex({i[0] - 1}));
      },
      1.0, 1, "M_z");
  defect::WoldReport rep = defect::wold(mz, 6);
  CHECK(rep.family_size == rep.window_size);
  CHECK(rep.residual_dim == 0);
  CHECK(rep.orthonormality_deviation == 0.0);
  CHECK(rep.layers.size() == 7);
}

TEST_CASE("wold of a unitary has no shift part") {
  models::ModelPair zp = models::zero_pair(models::default_unitary());
  defect::WoldReport rep = defect::wold(zp.V2, 5);  // I (x) W
  CHECK(rep.family_size == 0);
  CHECK(rep.residual_dim == rep.window_size);
}

TEST_CASE("wold of the negative product covers the window interior") {
  // oracle: kernel plus iterated images; the product pair is pure
  models::ModelPair neg = models::neg_pair();
  LazyOp v = compose(neg.V1, neg.V2);
  defect::WoldReport rep = defect::wold(v, 8);
  CHECK(rep.orthonormality_deviation <= 1e-13);
  std::vector<SparseVec> family;
  for (const auto& layer : rep.layers) family.insert(family.end(), layer.begin(), layer.end());
  // every interior window vector (grade <= 8 - band) lies in the family span
  int band = v.band_radius().value_or(1);
  for (const auto& i : neg.scheme.window(8 - band)) {
    CHECK(orthogonal_residual(SparseVec::basis(neg.scheme, i), family).norm() <= 1e-10);
  }
}

TEST_CASE("equivalence ladders agree with the detected class on shipped models") {
  for (const auto& name : models::shipped_model_names()) {
    models::ModelPair m = models::lookup(name);
    defect::LadderReport rep = defect::equivalence_suite(m.V1, m.V2, 6, m.triple);
    CHECK(rep.detected == m.declared_class);
    CHECK(rep.consistent);
  }
}

TEST_CASE("negative ladder witnesses the strict containments") {
  models::ModelPair neg = models::neg_pair();
  defect::LadderReport rep = defect::equivalence_suite(neg.V1, neg.V2, 6, neg.triple);
  REQUIRE(rep.consistent);
  for (const auto& L : rep.ladders) {
    if (L.ladder == DefectTag::Negative) {
      for (const auto& item : L.items) CHECK(item.holds);
    } else {
      for (const auto& item : L.items) CHECK(!item.holds);
    }
  }
}

TEST_CASE("mixed direct sum rejects every ladder") {
  models::ModelPair mix = models::direct_sum(models::pos_pair(), models::neg_pair());
  defect::LadderReport rep = defect::equivalence_suite(mix.V1, mix.V2, 5);
  CHECK(rep.detected == DefectTag::Mixed);
  CHECK(rep.consistent);
  for (const auto& L : rep.ladders) CHECK(L.all_false);
}

TEST_CASE("three-way classification consistency on random triples") {
  std::mt19937_64 gen(2024);
  for (int k = 0; k < 12; ++k) {
    bcl::BclTriple t;
    switch (k % 3) {
      case 0: t = rng::random_triple_zero(3 + static_cast<int>(gen() % 3ull), gen); break;
      case 1: t = rng::random_triple_offdiag(1 + static_cast<int>(gen() % 2ull), gen); break;
      default: t = rng::random_triple(4, gen); break;
    }
    auto [v1, v2] = bcl::multiplier_pair(t);
    DefectTag from_triple = bcl::classify(t).tag;
    DefectTag from_matrix = defect::defect_window_matrix(v1, v2, 5).tag;
    DefectTag from_fringe = defect::fringe_matrices(v1, v2, 5).classification;
    CHECK(from_triple == from_matrix);
    CHECK(from_matrix == from_fringe);
  }
}

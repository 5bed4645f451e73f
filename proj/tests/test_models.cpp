#include <doctest.h>

#include "isopair/defect.hpp"
#include "isopair/models.hpp"
#include "isopair/window_checks.hpp"

using namespace isopair;
using bcl::DefectTag;

TEST_CASE("negative model actions on the constant") {
  models::ModelPair neg = models::neg_pair();
  // tau1(1) = z2: U(z2) = z1 so U*(z1) = z2
  CHECK(deviation(neg.V1.forward(BasisIndex({0, 0})),
                  SparseVec::basis(neg.scheme, BasisIndex({0, 1}))) == 0.0);
  // tau2(1) = z1^2 z2: U(1) = z1^2, then multiply by z2
  CHECK(deviation(neg.V2.forward(BasisIndex({0, 0})),
                  SparseVec::basis(neg.scheme, BasisIndex({2, 1}))) == 0.0);
}

TEST_CASE("the diagonal-pairing unitary is unitary with deviation zero") {
  LazyOp u = models::neg_model_unitary();
  auto win = IndexScheme::hardy_bidisc().window(8);
  CHECK(isometry_deviation(u, win) == 0.0);
  CHECK(coisometry_deviation(u, win) == 0.0);
  // casewise action
  CHECK(deviation(u.forward(BasisIndex({3, 1})),
                  SparseVec::basis(u.domain(), BasisIndex({5, 1}))) == 0.0);  // m1 >= m2
  CHECK(deviation(u.forward(BasisIndex({2, 3})),
                  SparseVec::basis(u.domain(), BasisIndex({3, 2}))) == 0.0);  // m2 = m1+1
  CHECK(deviation(u.forward(BasisIndex({1, 4})),
                  SparseVec::basis(u.domain(), BasisIndex({1, 2}))) == 0.0);  // m2 >= m1+2
}

TEST_CASE("every shipped model passes its pair checks with deviation zero") {
  for (const auto& name : models::shipped_model_names()) {
    models::ModelPair m = models::lookup(name);
    auto checks = window_checks(m.V1, m.V2, m.scheme.window(5));
    CHECK(find_check(checks, "isometry_1").max_deviation == 0.0);
    CHECK(find_check(checks, "isometry_2").max_deviation == 0.0);
    CHECK(find_check(checks, "commutation").max_deviation == 0.0);
    CHECK(find_check(checks, "adjoint_consistency_1").max_deviation == 0.0);
    CHECK(find_check(checks, "adjoint_consistency_2").max_deviation == 0.0);
  }
}

TEST_CASE("declared classes match the certified defect classification") {
  for (const auto& name : models::shipped_model_names()) {
    models::ModelPair m = models::lookup(name);
    defect::DefectReport rep = defect::defect_window_matrix(m.V1, m.V2, 6);
    CHECK(rep.tag == m.declared_class);
    CHECK(rep.support_certified);
  }
}

TEST_CASE("zero pair with W = diag(1, i) has exactly vanishing defect") {
  models::ModelPair m = models::zero_pair(models::default_unitary());
  auto win = m.scheme.window(5);
  Eigen::MatrixXcd c = compress(defect::defect_op(m.V1, m.V2), win);
  CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("twisted and plain zero pairs intertwine through Lambda") {
  Eigen::MatrixXcd w = models::default_unitary();
  models::ModelPair plain = models::zero_pair(w), tw = models::zero_pair_twisted(w);
  LazyOp lam = models::intertwiner_zero(w);
  for (const auto& i : plain.scheme.window(6)) {
    CHECK(deviation(apply(lam, tw.V1.forward(i)), apply(plain.V1, lam.forward(i))) <= 1e-14);
    CHECK(deviation(apply(lam, tw.V2.forward(i)), apply(plain.V2, lam.forward(i))) <= 1e-14);
  }
}

TEST_CASE("equal-range pair: shared kernels and twisted product") {
  Cplx phase = std::polar(1.0, 0.7);
  Eigen::MatrixXcd w(1, 1);
  w << phase;
  models::ModelPair m = models::offdiag_pair(w);
  // kernels of both adjoints coincide (ran V1 = ran V2)
  auto k1 = window_nullspace(adjoint(m.V1), m.scheme.window(6));
  auto k2 = window_nullspace(adjoint(m.V2), m.scheme.window(6));
  CHECK(k1.size() == 1);
  CHECK(k2.size() == 1);
  CHECK(subspace_inclusion_deviation(k1, k2) <= 1e-13);
  // V1 V2 = e^{i theta} M_{z^2}; ker V* = span{1, z}
  LazyOp prod = compose(m.V1, m.V2);
  SparseVec want(m.scheme);
  want.set(BasisIndex({2}), phase);
  CHECK(deviation(prod.forward(BasisIndex({0})), want) == 0.0);
  auto kv = window_nullspace(adjoint(prod), m.scheme.window(6));
  CHECK(kv.size() == 2);
}

TEST_CASE("intertwiner index maps follow the displayed formulas") {
  LazyOp ln = models::intertwiner_neg();
  // z1^3 z2 -> e_2 (x) z^1
  CHECK(deviation(ln.forward(BasisIndex({3, 1})),
                  SparseVec::basis(ln.codomain(), BasisIndex({1, 2}))) == 0.0);
  LazyOp lp = models::intertwiner_pos();
  // z1^(m+k) z2^k -> e_{-(m+1)} z^k with m = 2, k = 1
  CHECK(deviation(lp.forward(BasisIndex({3, 1})),
                  SparseVec::basis(lp.codomain(), BasisIndex({1, -3}))) == 0.0);
  // z1^k z2^(m+k) -> e_{m-1} z^k with m = 2, k = 1
  CHECK(deviation(lp.forward(BasisIndex({1, 3})),
                  SparseVec::basis(lp.codomain(), BasisIndex({1, 1}))) == 0.0);
}

TEST_CASE("neg intertwiner carries tau onto the psi multipliers") {
  models::ModelPair neg = models::neg_pair(), psi = models::psi_pair();
  LazyOp lam = models::intertwiner_neg();
  SparseVec lhs = apply(lam, neg.V1.forward(BasisIndex({0, 0})));
  SparseVec rhs = apply(psi.V1, lam.forward(BasisIndex({0, 0})));
  CHECK(deviation(lhs, rhs) == 0.0);
  for (const auto& i : neg.scheme.window(8)) {
    CHECK(deviation(apply(lam, neg.V1.forward(i)), apply(psi.V1, lam.forward(i))) == 0.0);
    CHECK(deviation(apply(lam, neg.V2.forward(i)), apply(psi.V2, lam.forward(i))) == 0.0);
  }
}

TEST_CASE("embedding J fixes the constant and matches tau images") {
  LazyOp j = models::invariant_embedding();
  models::ModelPair neg = models::neg_pair();
  CHECK(deviation(j.forward(BasisIndex({0, 0})),
                  SparseVec::basis(j.domain(), BasisIndex({0, 0}))) == 0.0);
  // J(z2) = tau2(1) = z1^2 z2
  CHECK(deviation(j.forward(BasisIndex({0, 1})),
                  SparseVec::basis(j.domain(), BasisIndex({2, 1}))) == 0.0);
  // J e_(m,n) = tau1^m tau2^n (1) for the whole grade-4 window
  for (const auto& i : j.domain().window(4)) {
    SparseVec x = SparseVec::basis(j.domain(), BasisIndex({0, 0}));
    for (int t = 0; t < i[1]; ++t) x = apply(neg.V2, x);
    for (int t = 0; t < i[0]; ++t) x = apply(neg.V1, x);
    CHECK(deviation(j.forward(i), x) == 0.0);
  }
  // adjoint inverts exactly on the image and kills the complement
  for (const auto& i : j.domain().window(4)) {
    CHECK(deviation(apply_adjoint(j, j.forward(i)), SparseVec::basis(j.domain(), i)) == 0.0);
  }
  CHECK(j.adjoint_action(BasisIndex({1, 0})).is_zero());  // z1 is not an image
}

TEST_CASE("tensor multiplicity keeps the class and scales the defect") {
  models::ModelPair t2 = models::tensor_multiplicity(models::neg_pair(), 2);
  CHECK(t2.declared_class == DefectTag::Negative);
  defect::DefectReport rep = defect::defect_window_matrix(t2.V1, t2.V2, 5);
  CHECK(rep.tag == DefectTag::Negative);
  CHECK(rep.support_certified);
  int minus_ones = 0;
  for (double e : rep.eigenvalues)
    if (std::abs(e + 1.0) <= 1e-13) ++minus_ones;
  CHECK(minus_ones == 2);  // -E_{z2} (x) I_2
}

TEST_CASE("direct sums combine classes pointwise") {
  models::ModelPair a = models::pos_pair();
  models::ModelPair z = models::zero_pair(models::default_unitary());
  models::ModelPair n = models::neg_pair();
  models::ModelPair sum_pz = models::direct_sum(a, z);
  CHECK(sum_pz.declared_class == DefectTag::Positive);
  defect::DefectReport rep = defect::defect_window_matrix(sum_pz.V1, sum_pz.V2, 4);
  CHECK(rep.tag == DefectTag::Positive);
  models::ModelPair sum_pn = models::direct_sum(a, n);
  CHECK(sum_pn.declared_class == DefectTag::Mixed);
  defect::DefectReport rep2 = defect::defect_window_matrix(sum_pn.V1, sum_pn.V2, 4);
  CHECK(rep2.tag == DefectTag::Mixed);
  // evidence is block diagonal: one +1 from the first block, one -1 from the second
  CHECK(rep2.eigenvalues.front() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rep2.eigenvalues.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("registry grammar resolves nested specs") {
  models::ModelPair m = models::lookup("tensor:neg:2");
  CHECK(m.declared_class == DefectTag::Negative);
  CHECK(m.scheme.mult() == 2);
  models::ModelPair s = models::lookup("sum:pos:neg");
  CHECK(s.declared_class == DefectTag::Mixed);
  models::ModelPair ts = models::lookup("sum:pos:tensor:neg:2");
  CHECK(ts.declared_class == DefectTag::Mixed);
  CHECK_THROWS_AS(models::lookup("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(models::lookup("zero:/no/such/file.json"), std::invalid_argument);
}

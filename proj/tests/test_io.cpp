#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "isopair/io.hpp"
#include "isopair/random_gen.hpp"

using namespace isopair;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/isopair_test_") + name;
}

}  // namespace

TEST_CASE("matrix files round-trip and validate unitarity on load") {
  std::mt19937_64 gen(21);
  Eigen::MatrixXcd w = rng::haar_unitary(3, gen);
  std::string path = temp_path("w.json");
  io::save_matrix_file(path, w);
  Eigen::MatrixXcd back = io::load_matrix_file(path);
  CHECK((w - back).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::MatrixXcd bad = 2.0 * w;
  std::string bad_path = temp_path("bad.json");
  io::save_matrix_file(bad_path, bad);
  CHECK_THROWS(io::load_matrix_file(bad_path));
  CHECK_NOTHROW(io::load_matrix_file(bad_path, /*require_unitary=*/false));
  std::remove(path.c_str());
  std::remove(bad_path.c_str());
}

TEST_CASE("triple files round-trip, flat row-major [re, im] pairs") {
  std::mt19937_64 gen(22);
  bcl::BclTriple t = rng::random_triple(3, gen);
  std::string path = temp_path("triple.json");
  io::save_triple_file(path, t);
  bcl::BclTriple back = io::load_triple(path);
  CHECK((t.finite_part().U - back.finite_part().U).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((t.finite_part().P - back.finite_part().P).cwiseAbs().maxCoeff() <= 1e-15);
  std::remove(path.c_str());

  bcl::BclTriple preset = io::load_triple("bilateral_p_minus");
  CHECK(!preset.is_finite());
  std::string ppath = temp_path("preset.json");
  io::save_triple_file(ppath, preset);
  CHECK(!io::load_triple(ppath).is_finite());
  std::remove(ppath.c_str());
}

TEST_CASE("scan CSV has the pinned column layout") {
  koszul::SpectrumSample s;
  s.has_z = true;
  s.z = Cplx(0.25, 0.0);
  s.l1 = Cplx(0.5, -0.5);
  s.l2 = Cplx(0.5, 0.5);
  s.in_spectrum = true;
  s.break_stages = {3};
  s.certificate = koszul::Certificate::EigvecAdjoint;
  s.residual = 1e-16;
  std::string csv = io::scan_csv({s});
  CHECK(csv.find("z_re,z_im,l1_re,l1_im,l2_re,l2_im,in_spectrum,break_stages,certificate,"
                 "residual\n") == 0);
  CHECK(csv.find(",1,3,eigvec_adjoint,") != std::string::npos);
  // byte-identical on re-serialization
  CHECK(csv == io::scan_csv({s}));
}

TEST_CASE("reports carry the format version and the subject description") {
  bcl::DefectClass cls;
  cls.tag = bcl::DefectTag::Negative;
  cls.evidence = {-1.0, 0.0};
  cls.support_certified = true;
  std::string j = io::defect_class_json(cls, "neg", "a test subject");
  CHECK(j.find("\"format_version\": \"1\"") != std::string::npos);
  CHECK(j.find("\"subject_description\": \"a test subject\"") != std::string::npos);
  CHECK(j.find("\"Negative\"") != std::string::npos);
  // zero eigenvalues are dropped from the evidence list
  CHECK(j.find("0.0") == std::string::npos);
}

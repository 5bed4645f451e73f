#include "isopair/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace isopair::io {

using nlohmann::json;

namespace {

json cplx_json(Cplx v) { return json::array({v.real(), v.imag()}); }

json eigenvalues_json(const std::vector<double>& eigs, double drop_below = 1e-10) {
  // nonzero evidence only; exact zeros clutter the reports
  json out = json::array();
  for (double e : eigs)
    if (std::abs(e) > drop_below) out.push_back(e);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXcd load_matrix_file(const std::string& path, bool require_unitary, double tol) {
  json j = load_json_file(path);
  int d = j.at("dim").get<int>();
  const auto& rows = j.at("rows");
  if (d <= 0 || static_cast<int>(rows.size()) != d)
    throw std::runtime_error(path + ": dim and rows disagree");
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(rows[r].size()) != d) throw std::runtime_error(path + ": ragged rows");
    for (int c = 0; c < d; ++c)
      m(r, c) = Cplx(rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>());
  }
  if (require_unitary) {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    double dev = std::max((m.adjoint() * m - id).cwiseAbs().maxCoeff(),
                          (m * m.adjoint() - id).cwiseAbs().maxCoeff());
    if (dev > tol)
      throw std::runtime_error(path + ": matrix is not unitary (deviation " +
                               std::to_string(dev) + ")");
  }
  return m;
}

void save_matrix_file(const std::string& path, const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cplx_json(m(r, c)));
    rows.push_back(row);
  }
  json j{{"dim", m.rows()}, {"rows", rows}};
  write_file(path, j.dump(2) + "\n");
}

bcl::BclTriple load_triple(const std::string& path_or_preset) {
  if (bcl::BclTriple::is_preset_name(path_or_preset))
    return bcl::BclTriple::preset(path_or_preset);
  json j = load_json_file(path_or_preset);
  if (j.contains("preset")) return bcl::BclTriple::preset(j.at("preset").get<std::string>());
  int d = j.at("dim").get<int>();
  auto read_flat = [&](const char* key) {
    const auto& flat = j.at(key);
    if (static_cast<int>(flat.size()) != d * d)
      throw std::runtime_error(path_or_preset + ": " + key + " must hold dim^2 entries");
    Eigen::MatrixXcd m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const auto& e = flat[r * d + c];
        m(r, c) = Cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    return m;
  };
  return bcl::BclTriple::finite(read_flat("U"), read_flat("P"));
}

void save_triple_file(const std::string& path, const bcl::BclTriple& t) {
  json j;
  if (t.is_finite()) {
    const auto& f = t.finite_part();
    int d = f.dim();
    j["dim"] = d;
    auto flat = [&](const Eigen::MatrixXcd& m) {
      json out = json::array();
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out.push_back(cplx_json(m(r, c)));
      return out;
    };
    j["U"] = flat(f.U);
    j["P"] = flat(f.P);
  } else {
    j["preset"] = t.lazy_part().name;
  }
  write_file(path, j.dump(2) + "\n");
}

std::string defect_report_json(const defect::DefectReport& rep, const std::string& subject,
                               const std::string& description) {
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"window_grade", rep.window_grade},
         {"window_size", rep.window.size()},
         {"eigenvalues", eigenvalues_json(rep.eigenvalues)},
         {"class", bcl::to_string(rep.tag)},
         {"support_certified", rep.support_certified},
         {"boundary_ring_max", rep.boundary_ring_max},
         {"hermiticity_deviation", rep.hermiticity_deviation},
         {"dim_ker_v1", rep.ker_v1.size()},
         {"dim_ker_v2", rep.ker_v2.size()},
         {"dim_ker_v", rep.ker_v.size()}};
  return j.dump(2) + "\n";
}

std::string defect_class_json(const bcl::DefectClass& cls, const std::string& subject,
                              const std::string& description) {
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"class", bcl::to_string(cls.tag)},
         {"eigenvalues", eigenvalues_json(cls.evidence)},
         {"support_certified", cls.support_certified}};
  return j.dump(2) + "\n";
}

std::string scan_csv(const std::vector<koszul::SpectrumSample>& samples) {
  std::ostringstream os;
  os << "z_re,z_im,l1_re,l1_im,l2_re,l2_im,in_spectrum,break_stages,certificate,residual\n";
  for (const auto& s : samples) {
    if (s.has_z) {
      os << csv_num(s.z.real()) << ',' << csv_num(s.z.imag()) << ',';
    } else {
      os << ",,";
    }
    os << csv_num(s.l1.real()) << ',' << csv_num(s.l1.imag()) << ',' << csv_num(s.l2.real())
       << ',' << csv_num(s.l2.imag()) << ',' << (s.in_spectrum ? 1 : 0) << ',';
    for (int st : s.break_stages) os << st;
    os << ',' << koszul::to_string(s.certificate) << ',' << csv_num(s.residual) << '\n';
  }
  return os.str();
}

std::string scan_summary_json(const koszul::ScanSummary& s) {
  json j{{"format_version", kFormatVersion},
         {"subject", s.subject},
         {"subject_description", s.subject_description},
         {"class", bcl::to_string(s.cls)},
         {"predicted_set_descriptor", s.predicted},
         {"hausdorff_one_sided", json::array({s.pred_to_samples, s.samples_to_pred})},
         {"per_z_hausdorff", s.per_z_hausdorff},
         {"grid", s.grid},
         {"grid_resolution", s.grid_resolution},
         {"tolerances",
          {{"rank", s.tol_rank}, {"residual", s.tol_residual}, {"dedup", s.dedup}}},
         {"certified_in_spectrum", s.certified_in_spectrum},
         {"not_certified", s.not_certified}};
  return j.dump(2) + "\n";
}

std::string ladder_report_json(const defect::LadderReport& rep, const std::string& subject,
                               const std::string& description) {
  json ladders = json::array();
  for (const auto& L : rep.ladders) {
    json items = json::array();
    for (const auto& item : L.items)
      items.push_back(json{{"id", item.id}, {"holds", item.holds}, {"deviation", item.deviation}});
    ladders.push_back(json{{"class", bcl::to_string(L.ladder)},
                           {"all_true", L.all_true},
                           {"all_false", L.all_false},
                           {"items", items}});
  }
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"detected_class", bcl::to_string(rep.detected)},
         {"consistent", rep.consistent},
         {"offending", rep.offending},
         {"ladders", ladders}};
  return j.dump(2) + "\n";
}

std::string fringe_report_json(const defect::FringeReport& rep, const std::string& subject,
                               const std::string& description) {
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"classification", bcl::to_string(rep.classification)},
         {"kernels_stabilized", rep.kernels_stabilized},
         {"f1",
          {{"cols", rep.f1.cols()},
           {"isometry_deviation", rep.f1_isometry_dev},
           {"adjoint_isometry_deviation", rep.f1_adjoint_isometry_dev},
           {"max_abs", rep.f1_max_abs}}},
         {"f2",
          {{"cols", rep.f2.cols()},
           {"isometry_deviation", rep.f2_isometry_dev},
           {"adjoint_isometry_deviation", rep.f2_adjoint_isometry_dev},
           {"max_abs", rep.f2_max_abs}}}};
  return j.dump(2) + "\n";
}

std::string wold_report_json(const defect::WoldReport& rep, const std::string& subject,
                             const std::string& description) {
  json layers = json::array();
  for (const auto& layer : rep.layers) layers.push_back(layer.size());
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"window_grade", rep.window_grade},
         {"window_size", rep.window_size},
         {"layer_sizes", layers},
         {"family_size", rep.family_size},
         {"residual_dim", rep.residual_dim},
         {"orthonormality_deviation", rep.orthonormality_deviation}};
  return j.dump(2) + "\n";
}

std::string projection_report_json(const defect::ProjectionIdentityReport& rep,
                                   const std::string& subject, const std::string& description) {
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"window_grade", rep.window_grade},
         {"kernels_stabilized", rep.kernels_stabilized},
         {"deviation_form1", rep.deviation_form1},
         {"deviation_form2", rep.deviation_form2},
         {"dim_ker_v1", rep.dim_ker_v1},
         {"dim_ker_v2", rep.dim_ker_v2},
         {"dim_ker_v", rep.dim_ker_v},
         {"dim_v1_ker_v2", rep.dim_v1_ker_v2},
         {"dim_v2_ker_v1", rep.dim_v2_ker_v1},
         {"dims_consistent", rep.dims_consistent}};
  return j.dump(2) + "\n";
}

std::string sarkar_report_json(const bcl::SarkarResult& res, const std::string& subject,
                               const std::string& description, int window_grade) {
  bcl::DefectClass cls = bcl::classify(res.triple);
  json j{{"format_version", kFormatVersion},
         {"subject", subject},
         {"subject_description", description},
         {"window_grade", window_grade},
         {"dim_ker_v", res.kernel_basis.size()},
         {"dim_ker_v1", res.dim_ker_v1},
         {"stabilized", res.stabilized},
         {"unitary_deviation", res.unitary_deviation},
         {"note", res.note},
         {"class_of_compression", bcl::to_string(cls.tag)},
         {"eigenvalues", eigenvalues_json(cls.evidence)}};
  return j.dump(2) + "\n";
}

std::string stage2_report_json(const koszul::Stage2Report& rep) {
  json j{{"format_version", kFormatVersion},
         {"l1", cplx_json(rep.l1)},
         {"l2", cplx_json(rep.l2)},
         {"series_cap", rep.series_cap},
         {"generator_count", rep.generator_count},
         {"pattern_ok", rep.pattern_ok},
         {"pattern_deviation", rep.pattern_deviation},
         {"pairings", rep.pairings},
         {"max_pairing", rep.max_pairing},
         {"pairing_bound", rep.pairing_bound},
         {"residue_deviation", rep.residue_deviation},
         {"tail_bound", rep.tail_bound},
         {"tail_threshold", rep.tail_threshold},
         {"tail_ok", rep.tail_ok},
         {"certified", rep.certified()}};
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace isopair::io

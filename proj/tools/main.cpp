// isopair: construct commuting-isometry models, compute defect operators,
// and certify Taylor joint-spectrum claims on finite windows.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "isopair/io.hpp"
#include "isopair/verify.hpp"

namespace {

using namespace isopair;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUncertified = 2;

struct CommonOpts {
  std::string model;
  std::string triple;
  int grade = 8;
  double tol_rank = 1e-9;
  double tol_residual = 1e-10;
  uint64_t seed = rng::kDefaultSeed;
  std::string out;
  std::string csv_path;
  std::string json_path;
};

void add_subject_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--model", o.model,
                  "model spec: pos|neg|psi|eta|zero[:W.json]|offdiag[:W.json]|"
                  "zero_twisted[:W.json]|tensor:<model>:<d>|sum:<a>:<b>");
  cmd->add_option("--triple", o.triple, "triple file or preset name");
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--grade", o.grade, "window grade")->check(CLI::Range(1, 64));
  cmd->add_option("--tol-rank", o.tol_rank, "numerical-rank tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-residual", o.tol_residual, "certificate residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "seed for randomized suites");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

models::MatrixLoader file_loader() {
  return [](const std::string& path) { return io::load_matrix_file(path); };
}

struct Subject {
  std::optional<models::ModelPair> model;
  std::optional<bcl::BclTriple> triple;
  std::string name;
  std::string description;
};

Subject resolve_subject(const CommonOpts& o, bool required = true) {
  Subject s;
  if (!o.model.empty() && !o.triple.empty())
    throw CLI::ValidationError("give either --model or --triple, not both");
  if (!o.model.empty()) {
    s.model = models::lookup(o.model, file_loader());
    s.name = o.model;
    s.description = s.model->description;
  } else if (!o.triple.empty()) {
    s.triple = io::load_triple(o.triple);
    s.name = o.triple;
    s.description = "BCL triple " + s.triple->name();
  } else if (required) {
    throw CLI::ValidationError("a subject is required: --model or --triple");
  }
  return s;
}

void emit(const CommonOpts& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    io::write_file(o.out, content);
  }
}

int run_classify(const CommonOpts& o) {
  Subject s = resolve_subject(o);
  if (s.model) {
    defect::DefectReport rep = defect::defect_window_matrix(s.model->V1, s.model->V2, o.grade);
    emit(o, io::defect_report_json(rep, s.name, s.description));
    return rep.support_certified ? kExitOk : kExitUncertified;
  }
  bcl::DefectClass cls = bcl::classify(*s.triple, o.grade);
  emit(o, io::defect_class_json(cls, s.name, s.description));
  return cls.support_certified ? kExitOk : kExitUncertified;
}

int run_defect(const CommonOpts& o) {
  Subject s = resolve_subject(o);
  models::ModelPair m =
      s.model ? *s.model
              : [&] {
                  auto [v1, v2] = bcl::multiplier_pair(*s.triple);
                  return models::ModelPair{v1,    v2, bcl::classify(*s.triple).tag,
                                           s.triple->multiplier_scheme(), s.name,
                                           s.description, *s.triple};
                }();
  defect::DefectReport rep = defect::defect_window_matrix(m.V1, m.V2, o.grade);
  defect::ProjectionIdentityReport proj =
      defect::verify_projection_identities(m.V1, m.V2, o.grade);
  std::string body = "{\n\"defect\": " + io::defect_report_json(rep, s.name, s.description) +
                     ",\n\"projection_identities\": " +
                     io::projection_report_json(proj, s.name, s.description) + "}\n";
  emit(o, body);
  return rep.support_certified && proj.kernels_stabilized ? kExitOk : kExitUncertified;
}

int run_scan(const CommonOpts& o, const std::string& zgrid_spec, const std::string& lgrid_spec) {
  Subject s = resolve_subject(o);
  koszul::ScanConfig cfg;
  cfg.tol_rank = o.tol_rank;
  cfg.tol_residual = o.tol_residual;
  auto parse_grid = [](const std::string& spec, int& a, int& b) {
    auto x = spec.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("grid spec must look like 12x12");
    a = std::stoi(spec.substr(0, x));
    b = std::stoi(spec.substr(x + 1));
    if (a < 1 || b < 1) throw CLI::ValidationError("grid spec must be positive");
  };
  if (!zgrid_spec.empty()) parse_grid(zgrid_spec, cfg.zgrid.radial, cfg.zgrid.angular);
  if (!lgrid_spec.empty()) {
    int a = 0, b = 0;
    parse_grid(lgrid_spec, a, b);
    cfg.lgrid = a;
  }
  koszul::ScanResult res = s.model ? koszul::scan_model(*s.model, cfg)
                                   : koszul::scan_triple(*s.triple, cfg, s.name);
  if (!o.csv_path.empty()) io::write_file(o.csv_path, io::scan_csv(res.samples));
  std::string summary = io::scan_summary_json(res.summary);
  if (!o.json_path.empty()) {
    io::write_file(o.json_path, summary);
  } else {
    emit(o, summary);
  }
  const auto& sum = res.summary;
  bool formula_classes =
      sum.cls == bcl::DefectTag::Zero || sum.cls == bcl::DefectTag::OffDiagonal;
  bool hausdorff_ok = true;
  if (formula_classes || sum.pred_to_samples > 0.0) {
    hausdorff_ok = sum.pred_to_samples <= 2.0 * sum.grid_resolution + 1e-8 &&
                   sum.samples_to_pred <= o.tol_residual + 1e-8;
  }
  if (formula_classes && !s.model) hausdorff_ok = hausdorff_ok && sum.per_z_hausdorff <= 1e-8;
  bool certified_ok = sum.not_certified == 0;
  return hausdorff_ok && certified_ok ? kExitOk : kExitUncertified;
}

int run_verify(const CommonOpts& o, const std::string& suite, int count, double l1_re,
               double l1_im, double l2_re, double l2_im) {
  verify::SuiteResult res;
  if (suite == "identities") {
    res = verify::identities_suite(o.grade, o.seed, count > 0 ? count : 50, 8);
  } else if (suite == "ladders") {
    res = verify::ladders_suite(o.grade, o.seed, count > 0 ? count : 50);
  } else if (suite == "intertwiners") {
    res = verify::intertwiners_suite(o.grade);
  } else if (suite == "koszul-oracle") {
    res = verify::koszul_oracle_suite(o.seed, count > 0 ? count : 200, 6, o.tol_rank, 50);
  } else if (suite == "stage2-neg") {
    res = verify::stage2_suite(Cplx(l1_re, l1_im), Cplx(l2_re, l2_im),
                               o.grade > 8 ? o.grade : 40, 20);
  } else if (suite == "embedding") {
    res = verify::embedding_suite(o.grade > 4 ? 4 : o.grade);
  } else {
    throw CLI::ValidationError(
        "unknown suite; pick one of identities, ladders, intertwiners, koszul-oracle, "
        "stage2-neg, embedding");
  }
  emit(o, verify::suite_json(res));
  return res.all_pass() ? kExitOk : kExitUncertified;
}

int run_wold(const CommonOpts& o, int which) {
  Subject s = resolve_subject(o);
  if (!s.model) throw CLI::ValidationError("wold needs --model");
  LazyOp v = which == 1   ? s.model->V1
             : which == 2 ? s.model->V2
                          : compose(s.model->V1, s.model->V2);
  defect::WoldReport rep = defect::wold(v, o.grade);
  emit(o, io::wold_report_json(rep, s.name + (which ? ":V" + std::to_string(which) : ":V1V2"),
                               s.description));
  return kExitOk;
}

int run_fringe(const CommonOpts& o) {
  Subject s = resolve_subject(o);
  if (!s.model) throw CLI::ValidationError("fringe needs --model");
  defect::FringeReport rep = defect::fringe_matrices(s.model->V1, s.model->V2, o.grade);
  emit(o, io::fringe_report_json(rep, s.name, s.description));
  return rep.kernels_stabilized ? kExitOk : kExitUncertified;
}

int run_sarkar(const CommonOpts& o, const std::string& save_triple) {
  Subject s = resolve_subject(o);
  if (!s.model) throw CLI::ValidationError("sarkar needs --model");
  bcl::SarkarResult res = bcl::sarkar_triple(s.model->V1, s.model->V2, o.grade);
  emit(o, io::sarkar_report_json(res, s.name, s.description, o.grade));
  if (!save_triple.empty()) io::save_triple_file(save_triple, res.triple);
  return res.stabilized ? kExitOk : kExitUncertified;
}

int run_intertwine_check(const CommonOpts& o, const std::string& which,
                         const std::string& matrix_path) {
  std::optional<Eigen::MatrixXcd> w;
  if (!matrix_path.empty()) w = io::load_matrix_file(matrix_path);
  verify::SuiteResult all = verify::intertwiners_suite(o.grade, w);
  verify::SuiteResult res{"intertwiner-" + which, {}};
  for (const auto& a : all.assertions) {
    if (which == "all" || a.id.rfind(which + ".", 0) == 0) res.assertions.push_back(a);
  }
  if (res.assertions.empty()) throw CLI::ValidationError("unknown intertwiner: " + which);
  emit(o, verify::suite_json(res));
  return res.all_pass() ? kExitOk : kExitUncertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "commuting isometric pairs: models, defect operators, Koszul-complex rank analysis "
      "and joint-spectrum certificates on exact finite windows"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string zgrid_spec, lgrid_spec, suite, save_triple;
  std::string intertwiner_which = "all", matrix_path;
  int count = 0, wold_which = 0;
  double l1_re = 0.3, l1_im = 0.0, l2_re = 0.0, l2_im = 0.5;

  auto* classify = app.add_subcommand("classify", "defect sign class of a model or triple");
  add_subject_flags(classify, o);
  add_common_flags(classify, o);

  auto* defect_cmd = app.add_subcommand("defect", "windowed defect matrix report");
  add_subject_flags(defect_cmd, o);
  add_common_flags(defect_cmd, o);

  auto* scan = app.add_subcommand("scan", "joint-spectrum scan with certificates");
  add_subject_flags(scan, o);
  add_common_flags(scan, o);
  scan->add_option("--zgrid", zgrid_spec, "polar z-grid, e.g. 12x12");
  scan->add_option("--lgrid", lgrid_spec, "lambda grid, e.g. 24x24");
  scan->add_option("--csv", o.csv_path, "write per-sample CSV here");
  scan->add_option("--json", o.json_path, "write the summary JSON here");

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite,
                         "identities|ladders|intertwiners|koszul-oracle|stage2-neg|embedding")
      ->required();
  add_common_flags(verify_cmd, o);
  verify_cmd->add_option("--count", count, "number of random cases");
  verify_cmd->add_option("--l1-re", l1_re, "stage2: Re l1");
  verify_cmd->add_option("--l1-im", l1_im, "stage2: Im l1");
  verify_cmd->add_option("--l2-re", l2_re, "stage2: Re l2");
  verify_cmd->add_option("--l2-im", l2_im, "stage2: Im l2");

  auto* wold_cmd = app.add_subcommand("wold", "shift-part layers of one isometry");
  add_subject_flags(wold_cmd, o);
  add_common_flags(wold_cmd, o);
  wold_cmd->add_option("--which", wold_which, "0: V1V2 (default), 1: V1, 2: V2");

  auto* fringe = app.add_subcommand("fringe", "fringe operators on the kernel bases");
  add_subject_flags(fringe, o);
  add_common_flags(fringe, o);

  auto* sarkar = app.add_subcommand("sarkar", "concrete BCL triple from a pair");
  add_subject_flags(sarkar, o);
  add_common_flags(sarkar, o);
  sarkar->add_option("--save-triple", save_triple, "write the computed triple here");

  auto* iw = app.add_subcommand("intertwine-check", "unitarity and intertwining checks");
  add_common_flags(iw, o);
  iw->add_option("--which", intertwiner_which, "neg|pos|zero|off|all");
  iw->add_option("--matrix", matrix_path, "unitary matrix file for zero/off");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify->parsed()) return run_classify(o);
    if (defect_cmd->parsed()) return run_defect(o);
    if (scan->parsed()) return run_scan(o, zgrid_spec, lgrid_spec);
    if (verify_cmd->parsed())
      return run_verify(o, suite, count, l1_re, l1_im, l2_re, l2_im);
    if (wold_cmd->parsed()) return run_wold(o, wold_which);
    if (fringe->parsed()) return run_fringe(o);
    if (sarkar->parsed()) return run_sarkar(o, save_triple);
    if (iw->parsed()) return run_intertwine_check(o, intertwiner_which, matrix_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

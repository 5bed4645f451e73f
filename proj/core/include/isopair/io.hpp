#pragma once

#include <string>

#include "isopair/defect.hpp"
#include "isopair/koszul.hpp"

namespace isopair::io {

inline constexpr const char* kFormatVersion = "1";

/// Matrix files: {"dim": d, "rows": [[[re, im], ...], ...]}.
Eigen::MatrixXcd load_matrix_file(const std::string& path, bool require_unitary = true,
                                  double tol = 1e-10);
void save_matrix_file(const std::string& path, const Eigen::MatrixXcd& m);

/// Triple files: {"dim": d, "U": [[re, im] x d^2 row-major], "P": same} or
/// {"preset": "bilateral_p_minus" | "bilateral_p_zero_plus"}.  The argument
/// may also be a preset name directly.
bcl::BclTriple load_triple(const std::string& path_or_preset);
void save_triple_file(const std::string& path, const bcl::BclTriple& t);

std::string defect_report_json(const defect::DefectReport& rep, const std::string& subject,
                               const std::string& description);
std::string defect_class_json(const bcl::DefectClass& cls, const std::string& subject,
                              const std::string& description);

/// CSV columns: z_re, z_im, l1_re, l1_im, l2_re, l2_im, in_spectrum,
/// break_stages, certificate, residual.  break_stages is the digit string of
/// the broken stages ("123", "3", "" when none).
std::string scan_csv(const std::vector<koszul::SpectrumSample>& samples);
std::string scan_summary_json(const koszul::ScanSummary& s);

std::string ladder_report_json(const defect::LadderReport& rep, const std::string& subject,
                               const std::string& description);
std::string fringe_report_json(const defect::FringeReport& rep, const std::string& subject,
                               const std::string& description);
std::string wold_report_json(const defect::WoldReport& rep, const std::string& subject,
                             const std::string& description);
std::string projection_report_json(const defect::ProjectionIdentityReport& rep,
                                   const std::string& subject, const std::string& description);
std::string sarkar_report_json(const bcl::SarkarResult& res, const std::string& subject,
                               const std::string& description, int window_grade);
std::string stage2_report_json(const koszul::Stage2Report& rep);

void write_file(const std::string& path, const std::string& content);

}  // namespace isopair::io

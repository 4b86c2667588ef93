#pragma once

/// \file study_config.hpp
/// \brief Study configuration files and the CSV / aligned-text report writers.
///
/// Configuration files are flat `key = value` lists with optional `[solver]`
/// and `[output]` sections; `#` and `;` start comments. Unknown keys are
/// rejected.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crfem/analysis.hpp"
#include "crfem/mesh.hpp"
#include "crfem/solver.hpp"

namespace crfem {

struct OutputConfig {
  std::string csv;    ///< empty: no file
  std::string table;  ///< empty: no file
  std::string vtk;    ///< empty: no file
};

struct StudyConfig {
  std::string example = "1";
  MeshFamily mesh;
  std::vector<int> n_list;
  std::optional<double> nu_override;
  PicardConfig solver;
  ErrorRule error_rule = ErrorRule::Nodal;
  /// Worker threads for independent rows; 0 means one per hardware core.
  int threads = 0;
  OutputConfig output;

  /// Example problem with the viscosity override applied.
  ExactProblem problem() const;
};

/// Parses "4,8,16". Throws std::invalid_argument on malformed input.
std::vector<int> parse_n_list(const std::string& text);

/// Checks n_list non-empty, positive and strictly ascending, eps >= 1, a known
/// example, nu > 0, end_tol > 0 and a supported load quadrature degree.
/// Throws std::invalid_argument describing the first violation.
void validate_config(const StudyConfig& config);

StudyConfig parse_config(std::istream& in);
/// Throws std::runtime_error if the file cannot be read.
StudyConfig load_config(const std::string& path);

/// Resolves a requested thread count: 0 means hardware concurrency, and the
/// CRFEM_MAX_THREADS environment variable caps the result.
int resolve_thread_count(int requested);

inline constexpr const char* kCsvVersionLine = "# crfem-study-csv v1";

/// Versioned CSV: version line, metadata comment, header
/// N,h,Err_Vh,rate,Err_L2,rate,Err_Qh,rate,iters,dofs and one row per N at
/// full precision. Missing rates are empty fields.
void write_study_csv(std::ostream& out, const StudyReport& report);
/// Aligned table with six significant digits.
void write_study_table(std::ostream& out, const StudyReport& report);

/// Mesh-quality table (N, MinAngle, MaxAngle, DisSov, #Np) as CSV or text.
void write_quality_csv(std::ostream& out, const std::vector<int>& n_list,
                       const std::vector<MeshQualityReport>& quality);
void write_quality_table(std::ostream& out, const std::vector<int>& n_list,
                         const std::vector<MeshQualityReport>& quality);

}  // namespace crfem

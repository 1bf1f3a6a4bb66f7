#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ucc/ansatz.hpp"
#include "ucc/cc_reference.hpp"
#include "ucc/fci.hpp"
#include "ucc/singles_corr.hpp"
#include "ucc/vqe.hpp"

namespace ucc {

enum class MethodFamily { Ucc, Cc, Mp2, Fci };
enum class SinglesCorrectionOrder { None, Fourth, Sixth };

/// A parsed method label such as "tUCCD[6S]", "CCSD" or "FCI".
struct MethodSpec {
  std::string label;
  MethodFamily family = MethodFamily::Ucc;
  GeneratorKind kind = GeneratorKind::DoublesFull;  // UCC only
  bool trotterized = false;                         // UCC only
  bool cc_singles = false;                          // CC only
  SinglesCorrectionOrder correction = SinglesCorrectionOrder::None;

  /// Label without the correction suffix.
  std::string base_label() const;
};

/// Throws std::invalid_argument for unknown labels and for correction
/// suffixes on anything but the doubles-only UCC methods.
MethodSpec parse_method(const std::string& label);

struct CorrectionBreakdown {
  double e4s = 0.0;
  double e5 = 0.0;
  double e6 = 0.0;
};

struct MethodResult {
  std::string method;
  double e_total = 0.0;
  double e_corr = 0.0;
  std::optional<double> pct_corr;  // needs the FCI energy
  std::optional<CorrectionBreakdown> correction;
  bool converged = false;
  double wall_time = 0.0;  // seconds in this call; a cached optimisation costs nothing here
  int iterations = 0;
  std::string error;  // non-empty if the solver threw
};

/// 100 (e_method - e_hf) / (e_fci - e_hf). Throws std::domain_error unless e_fci < e_hf.
double percent_correlation(double e_method, double e_hf, double e_fci);

struct BenchConfig {
  VqeConfig vqe;
  CcConfig cc;
};

/// Everything derived from one integral file: spin-orbital Hamiltonian,
/// sector, Hamiltonian matrix, and cached FCI / VQE solutions so that
/// X, X[4S] and X[6S] share one optimisation.
class SystemContext {
 public:
  SystemContext(const SpatialIntegrals& ints, int n_frozen);
  static SystemContext from_file(const std::filesystem::path& fcidump, int n_frozen);

  const SpinOrbitalHamiltonian& hamiltonian() const { return h_; }
  const DeterminantSector& sector() const { return sector_; }
  const SectorOperator& matrix() const { return *ham_; }
  const FciResult& fci();

  /// Converged (or best) VQE for a doubles/singles-doubles ansatz; `start`
  /// is used only on the first request for that ansatz.
  const VqeResult& vqe(GeneratorKind kind, bool trotterized, const VqeConfig& cfg,
                       const std::vector<double>* start = nullptr);
  const GeneratorSet& generators(GeneratorKind kind, bool trotterized);

 private:
  struct UccEntry {
    GeneratorSet gens;
    std::optional<VqeResult> result;
  };
  UccEntry& entry(GeneratorKind kind, bool trotterized);

  SpinOrbitalHamiltonian h_;
  DeterminantSector sector_;
  std::unique_ptr<SectorOperator> ham_;
  std::optional<FciResult> fci_;
  std::map<std::pair<int, bool>, UccEntry> ucc_;

};

/// Runs one method. Solver exceptions are caught and reported through
/// `error` with converged = false; unknown labels throw before running.
MethodResult run_method(SystemContext& ctx, const MethodSpec& method, const BenchConfig& cfg,
                        const std::vector<double>* warm_start = nullptr);

struct ScanPoint {
  std::string tag;
  std::filesystem::path fcidump;
};

struct ScanRow {
  std::string geometry_tag;
  MethodResult result;
  std::optional<double> error_vs_fci;
};

/// Runs every method at every point in order. UCC optimisations start from
/// the previous point's converged parameters of the same ansatz.
std::vector<ScanRow> scan_pec(const std::vector<ScanPoint>& points, int n_frozen,
                              const std::vector<MethodSpec>& methods, const BenchConfig& cfg);

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

struct TableSystem {
  std::string name;
  std::filesystem::path fcidump;
  int n_frozen = 0;
};

struct TableColumn {
  std::string system;
  std::vector<MethodResult> results;  // one per method, in request order
};

std::vector<TableColumn> correlation_table(const std::vector<TableSystem>& systems,
                                           const std::vector<MethodSpec>& methods, const BenchConfig& cfg);

/// Method rows, system columns, percent correlation to two decimals.
void write_table_csv(std::ostream& out, const std::vector<TableColumn>& table,
                     const std::vector<MethodSpec>& methods);

/// Machine-readable summary of a set of results.
std::string results_json(const std::vector<std::pair<std::string, MethodResult>>& tagged);

/// Structured run description read from a JSON file; relative paths are
/// resolved against the file's directory.
struct RunConfig {
  std::vector<TableSystem> systems;
  std::vector<ScanPoint> scan;
  std::string scan_name;
  int scan_frozen = 0;
  std::vector<std::string> methods;
  BenchConfig bench;
  /// Optional expected percentages: system name -> method -> value.
  std::map<std::string, std::map<std::string, double>> reference;
};

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace ucc

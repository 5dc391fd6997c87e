#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bdpr/admm.hpp"
#include "bdpr/measurements.hpp"
#include "bdpr/recovery.hpp"

namespace bdpr {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Monte-Carlo phase-transition grid: every (m, k, n) with k, n ≤ m from
/// m_values × kn_pairs, each run `trials_per_cell` times.
struct GridSpec {
  std::vector<Eigen::Index> m_values;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> kn_pairs;
  int trials_per_cell = 20;
  std::uint64_t master_seed = 0;
  SolverConfig solver;
  EnsembleModel model = EnsembleModel::DirectGaussian;
  SubspaceKind subspace_b = SubspaceKind::Gaussian;
  SubspaceKind subspace_c = SubspaceKind::Gaussian;
  double success_threshold = kDefaultSuccessThreshold;

  void validate() const;
};

/// For each sum s: the single pair (⌊s/2⌋, s − ⌊s/2⌋).
std::vector<std::pair<Eigen::Index, Eigen::Index>> balanced_pairs(
    const std::vector<Eigen::Index>& sums);

/// Seed of trial t in cell (m, k, n): mix_seed(master, {m, k, n, t}).
std::uint64_t trial_seed(std::uint64_t master, Eigen::Index m, Eigen::Index k, Eigen::Index n,
                         int t);

using CellKey = std::tuple<Eigen::Index, Eigen::Index, Eigen::Index>;  // (m, k, n)

enum class TrialStatus { Solved, NumericalFailure };

struct TrialRecord {
  Eigen::Index m = 0, k = 0, n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::Solved;
  bool converged = false;
  int iters = 0;
  double error = 0.0;
  double rank1_ratio_H = 0.0;
  double rank1_ratio_M = 0.0;
  double trace_H = 0.0;
  double trace_M = 0.0;
  /// converged and error < threshold
  bool success = false;
  std::string message;  // failure description
};

struct CellStats {
  int trials = 0;
  int successes = 0;
  int numerical_failures = 0;
  int nonconverged = 0;
  double mean_error = 0.0;  // over solved trials; NaN if none
  double mean_iters = 0.0;  // over solved trials; NaN if none
};

struct PhaseGrid {
  GridSpec spec;
  std::map<CellKey, CellStats> cells;
  std::vector<TrialRecord> records;  // ordered by (m, k, n, trial)
};

/// Runs one trial: generate, solve, score. Numerical failures are captured
/// in the record, never thrown.
TrialRecord run_trial(const GridSpec& spec, Eigen::Index m, Eigen::Index k, Eigen::Index n,
                      int trial);

/// Runs every trial on a pool of `jobs` OpenMP threads (0 = default team
/// size). Output is independent of `jobs` and of scheduling order.
PhaseGrid run_phase_grid(const GridSpec& spec, int jobs = 0);

/// Aggregates records (already ordered) into per-cell statistics.
std::map<CellKey, CellStats> aggregate(const std::vector<TrialRecord>& records, int trials_per_cell);

/// CSV with header m,k,n,kn_sum,trials,successes,rate,mean_error,mean_iters;
/// rows sorted by (m, k+n, k); rate with 6 decimals, means with 17
/// significant digits.
std::string format_csv(const PhaseGrid& grid);
void emit_csv(const PhaseGrid& grid, const std::filesystem::path& path);

struct CsvCell {
  int trials;
  int successes;
  double rate;
  double mean_error;
  double mean_iters;
};
std::map<CellKey, CsvCell> parse_csv(std::string_view text);

/// Binary PGM (P5, maxval 255): rows are m ascending downward, columns are
/// k+n ascending rightward, pixel = round(255·(1 − rate)) with rates of cells
/// sharing (m, k+n) averaged. Positions without any cell are white.
std::string format_heatmap(const PhaseGrid& grid);
void emit_heatmap(const PhaseGrid& grid, const std::filesystem::path& path);

/// Success rate per (m, k+n), averaged over (k, n) pairs.
std::map<std::pair<Eigen::Index, Eigen::Index>, double> rate_by_sum(const PhaseGrid& grid);

GridSpec grid_spec_from_json(const nlohmann::json& j);
nlohmann::json grid_spec_to_json(const GridSpec& spec);
nlohmann::json manifest_json(const PhaseGrid& grid);

// --- phase-diagram analysis -------------------------------------------------

/// Spearman rank correlation with average ranks for ties. Returns NaN when
/// either series is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct MonotonicityCheck {
  Eigen::Index k, n;
  double rho;       // NaN when the rate series is constant
  bool constant;    // a constant series is trivially non-decreasing
};

/// Spearman correlation between m and success rate for every (k, n).
std::vector<MonotonicityCheck> monotonicity(const PhaseGrid& grid);

struct BoundaryFit {
  double c;          // fitted constant of k+n = c·m / log²m
  double sharpness;  // logistic slope on log((k+n)·log²m / m)
  double accuracy;   // fraction of cells with (rate ≥ 0.5) == (k+n ≤ c·m/log²m)
  int cells;
};

/// Logistic regression of per-cell success counts on
/// z = log c − log((k+n)·log²m / m), fitted by Newton's method with a small
/// ridge on the slope so separable data still give a finite fit.
BoundaryFit fit_boundary(const PhaseGrid& grid);

}  // namespace bdpr

#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "bdpr/admm.hpp"
#include "bdpr/measurements.hpp"
#include "bdpr/recovery.hpp"

namespace bdpr {

using Json = nlohmann::json;

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kResultFormatVersion = 1;

/// Dense matrices are stored row-major with re/im interleaved:
/// [re(0,0), im(0,0), re(0,1), im(0,1), ...].
Json complex_matrix_to_json(const CMatrix& a);
CMatrix complex_matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);
Json complex_vector_to_json(const CVector& v);
CVector complex_vector_from_json(const Json& j, Eigen::Index size);
Json real_vector_to_json(const RVector& v);
RVector real_vector_from_json(const Json& j, Eigen::Index size);

/// Instance document:
/// {version, m, k, n, model, subspace_b, subspace_c, seed, rng, B, C, y, delta, truth?}
/// with truth = {h, m} as interleaved complex vectors.
Json instance_to_json(const ProblemInstance& inst);
/// Rebuilds the measurement rows from B, C and the model, then validates.
/// Throws IoError on malformed documents or failed validation.
ProblemInstance instance_from_json(const Json& j);

Json config_to_json(const SolverConfig& c);
/// Reads the fields present in `j` on top of `base`.
SolverConfig config_from_json(const Json& j, SolverConfig base = {});

/// Result document:
/// {version, config, objective, converged, iters, residual_history, H_hat,
///  M_hat, k, n, wall_time, report?}. residual_history holds [iter, split,
/// meas, dual] rows thinned to every log_every-th iteration plus the last.
Json result_to_json(const SolverResult& r, const std::optional<RecoveryReport>& report);
Json report_to_json(const RecoveryReport& r);

Json read_json_file(const std::filesystem::path& path);
/// Writes `j.dump(2)` plus a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const Json& j);

ProblemInstance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const ProblemInstance& inst);

}  // namespace bdpr

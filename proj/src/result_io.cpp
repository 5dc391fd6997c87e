#include "bdpr/error.hpp"
#include "bdpr/io.hpp"

namespace bdpr {

Json config_to_json(const SolverConfig& c) {
  return {{"rho1", c.rho1},         {"rho2", c.rho2},         {"max_iters", c.max_iters},
          {"tol_abs", c.tol_abs},   {"tol_rel", c.tol_rel},   {"log_every", c.log_every},
          {"parallel_kernels", c.parallel_kernels}};
}

SolverConfig config_from_json(const Json& j, SolverConfig base) {
  try {
    if (j.contains("rho1")) base.rho1 = j.at("rho1").get<double>();
    if (j.contains("rho2")) base.rho2 = j.at("rho2").get<double>();
    if (j.contains("max_iters")) base.max_iters = j.at("max_iters").get<int>();
    if (j.contains("tol_abs")) base.tol_abs = j.at("tol_abs").get<double>();
    if (j.contains("tol_rel")) base.tol_rel = j.at("tol_rel").get<double>();
    if (j.contains("log_every")) base.log_every = j.at("log_every").get<int>();
    if (j.contains("parallel_kernels")) base.parallel_kernels = j.at("parallel_kernels").get<bool>();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed solver config: ") + e.what());
  }
  return base;
}

Json report_to_json(const RecoveryReport& r) {
  return {{"alpha", r.alpha},
          {"relative_error_lifted", r.relative_error_lifted},
          {"relative_error_vectors", r.relative_error_vectors},
          {"rank1_ratio_H", r.rank1_ratio_H},
          {"rank1_ratio_M", r.rank1_ratio_M},
          {"success", r.success}};
}

Json result_to_json(const SolverResult& r, const std::optional<RecoveryReport>& report) {
  Json hist = Json::array();
  const int every = r.config.log_every;
  for (std::size_t i = 0; i < r.residual_history.size(); ++i) {
    const auto& s = r.residual_history[i];
    const bool last = i + 1 == r.residual_history.size();
    if (last || (every > 0 && s.iter % every == 0)) {
      hist.push_back({s.iter, s.primal_split, s.primal_meas, s.dual});
    }
  }
  Json j;
  j["version"] = kResultFormatVersion;
  j["config"] = config_to_json(r.config);
  j["objective"] = r.objective;
  j["converged"] = r.converged;
  j["iters"] = r.iters;
  j["residual_history"] = std::move(hist);
  j["k"] = r.H_hat.dim();
  j["n"] = r.M_hat.dim();
  j["H_hat"] = complex_matrix_to_json(r.H_hat.matrix());
  j["M_hat"] = complex_matrix_to_json(r.M_hat.matrix());
  j["wall_time"] = r.wall_time;
  if (report) j["report"] = report_to_json(*report);
  return j;
}

}  // namespace bdpr

#include "bdpr/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bdpr/error.hpp"
#include "bdpr/io.hpp"
#include "bdpr/rng.hpp"

namespace bdpr {

void GridSpec::validate() const {
  if (trials_per_cell < 1) throw InvalidArgument("trials_per_cell must be >= 1");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] <= 0) throw InvalidArgument("m_values must be positive");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw InvalidArgument("m_values must be strictly ascending");
    }
  }
  for (const auto& [k, n] : kn_pairs) {
    if (k <= 0 || n <= 0) throw InvalidArgument("kn_pairs entries must be positive");
  }
  if (!(success_threshold > 0.0)) throw InvalidArgument("success_threshold must be positive");
  solver.validate();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> balanced_pairs(
    const std::vector<Eigen::Index>& sums) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index s : sums) {
    if (s < 2) throw InvalidArgument("k+n must be at least 2");
    out.emplace_back(s / 2, s - s / 2);
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, Eigen::Index m, Eigen::Index k, Eigen::Index n,
                         int t) {
  return mix_seed(master, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)});
}

TrialRecord run_trial(const GridSpec& spec, Eigen::Index m, Eigen::Index k, Eigen::Index n,
                      int trial) {
  TrialRecord rec;
  rec.m = m;
  rec.k = k;
  rec.n = n;
  rec.trial = trial;
  rec.seed = trial_seed(spec.master_seed, m, k, n, trial);
  try {
    const ProblemInstance inst =
        gen_instance(m, k, n, spec.subspace_b, spec.subspace_c, spec.model, rec.seed);
    SolverConfig cfg = spec.solver;
    cfg.verbose = false;
    const SolverResult res = solve(inst, cfg);
    const RecoveryReport rep =
        score({res.H_hat, res.M_hat}, *inst.truth, spec.success_threshold);
    rec.converged = res.converged;
    rec.iters = res.iters;
    rec.error = rep.relative_error_lifted;
    rec.rank1_ratio_H = rep.rank1_ratio_H;
    rec.rank1_ratio_M = rep.rank1_ratio_M;
    rec.trace_H = res.H_hat.trace();
    rec.trace_M = res.M_hat.trace();
    rec.success = res.converged && rep.success;
  } catch (const Error& e) {
    rec.status = TrialStatus::NumericalFailure;
    rec.message = e.what();
  } catch (const std::exception& e) {
    rec.status = TrialStatus::NumericalFailure;
    rec.message = std::string("unexpected: ") + e.what();
  }
  return rec;
}

std::map<CellKey, CellStats> aggregate(const std::vector<TrialRecord>& records,
                                       int trials_per_cell) {
  std::map<CellKey, CellStats> cells;
  std::map<CellKey, int> solved;
  for (const auto& r : records) {
    const CellKey key{r.m, r.k, r.n};
    CellStats& c = cells[key];
    c.trials += 1;
    if (r.status == TrialStatus::NumericalFailure) {
      c.numerical_failures += 1;
      continue;
    }
    solved[key] += 1;
    if (!r.converged) c.nonconverged += 1;
    if (r.success) c.successes += 1;
    c.mean_error += r.error;
    c.mean_iters += r.iters;
  }
  for (auto& [key, c] : cells) {
    const int s = solved[key];
    if (s == 0) {
      c.mean_error = std::numeric_limits<double>::quiet_NaN();
      c.mean_iters = std::numeric_limits<double>::quiet_NaN();
    } else {
      c.mean_error /= s;
      c.mean_iters /= s;
    }
    if (c.trials != trials_per_cell) {
      throw InvalidArgument("aggregate: cell has " + std::to_string(c.trials) + " trials, expected " +
                            std::to_string(trials_per_cell));
    }
  }
  return cells;
}

PhaseGrid run_phase_grid(const GridSpec& spec, int jobs) {
  spec.validate();
  struct Task {
    Eigen::Index m, k, n;
    int t;
  };
  std::vector<Task> tasks;
  for (Eigen::Index m : spec.m_values) {
    for (const auto& [k, n] : spec.kn_pairs) {
      if (k > m || n > m) continue;
      for (int t = 0; t < spec.trials_per_cell; ++t) tasks.push_back({m, k, n, t});
    }
  }
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return std::tie(a.m, a.k, a.n, a.t) < std::tie(b.m, b.k, b.n, b.t);
  });
  // kn_pairs may repeat a pair; keep each (m, k, n, t) once
  tasks.erase(std::unique(tasks.begin(), tasks.end(),
                          [](const Task& a, const Task& b) {
                            return std::tie(a.m, a.k, a.n, a.t) == std::tie(b.m, b.k, b.n, b.t);
                          }),
              tasks.end());

  std::vector<TrialRecord> records(tasks.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    records[static_cast<std::size_t>(i)] = run_trial(spec, task.m, task.k, task.n, task.t);
  }

  PhaseGrid grid;
  grid.spec = spec;
  grid.cells = aggregate(records, spec.trials_per_cell);
  grid.records = std::move(records);
  return grid;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::pair<CellKey, const CellStats*>> csv_order(const PhaseGrid& grid) {
  std::vector<std::pair<CellKey, const CellStats*>> rows;
  for (const auto& [key, c] : grid.cells) rows.emplace_back(key, &c);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    const auto& [ma, ka, na] = a.first;
    const auto& [mb, kb, nb] = b.first;
    return std::make_tuple(ma, ka + na, ka) < std::make_tuple(mb, kb + nb, kb);
  });
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

double parse_number(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw IoError("bad CSV number '" + field + "'");
  return v;
}

}  // namespace

std::string format_csv(const PhaseGrid& grid) {
  std::string out = "m,k,n,kn_sum,trials,successes,rate,mean_error,mean_iters\n";
  for (const auto& [key, c] : csv_order(grid)) {
    const auto& [m, k, n] = key;
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f",
                  static_cast<double>(c->successes) / static_cast<double>(c->trials));
    out += std::to_string(m) + ',' + std::to_string(k) + ',' + std::to_string(n) + ',' +
           std::to_string(k + n) + ',' + std::to_string(c->trials) + ',' +
           std::to_string(c->successes) + ',' + rate + ',' + format_double(c->mean_error) + ',' +
           format_double(c->mean_iters) + '\n';
  }
  return out;
}

void emit_csv(const PhaseGrid& grid, const std::filesystem::path& path) {
  write_text(path, format_csv(grid));
}

std::map<CellKey, CsvCell> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "m,k,n,kn_sum,trials,successes,rate,mean_error,mean_iters") {
    throw IoError("CSV: unexpected header");
  }
  std::map<CellKey, CsvCell> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(item);
    if (f.size() != 9) throw IoError("CSV: expected 9 fields in '" + line + "'");
    try {
      const CellKey key{std::stol(f[0]), std::stol(f[1]), std::stol(f[2])};
      if (std::stol(f[3]) != std::get<1>(key) + std::get<2>(key)) {
        throw IoError("CSV: kn_sum mismatch in '" + line + "'");
      }
      cells[key] = {std::stoi(f[4]), std::stoi(f[5]), parse_number(f[6]), parse_number(f[7]),
                    parse_number(f[8])};
    } catch (const std::logic_error&) {
      throw IoError("CSV: malformed row '" + line + "'");
    }
  }
  return cells;
}

std::map<std::pair<Eigen::Index, Eigen::Index>, double> rate_by_sum(const PhaseGrid& grid) {
  std::map<std::pair<Eigen::Index, Eigen::Index>, std::pair<double, int>> acc;
  for (const auto& [key, c] : grid.cells) {
    const auto& [m, k, n] = key;
    auto& a = acc[{m, k + n}];
    a.first += static_cast<double>(c.successes) / static_cast<double>(c.trials);
    a.second += 1;
  }
  std::map<std::pair<Eigen::Index, Eigen::Index>, double> out;
  for (const auto& [key, a] : acc) out[key] = a.first / a.second;
  return out;
}

std::string format_heatmap(const PhaseGrid& grid) {
  if (grid.cells.empty()) throw InvalidArgument("emit_heatmap: empty grid");
  const auto rates = rate_by_sum(grid);
  std::vector<Eigen::Index> ms;
  std::vector<Eigen::Index> sums;
  for (const auto& [key, r] : rates) {
    ms.push_back(key.first);
    sums.push_back(key.second);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  std::string out = "P5\n" + std::to_string(sums.size()) + ' ' + std::to_string(ms.size()) + "\n255\n";
  for (Eigen::Index m : ms) {
    for (Eigen::Index s : sums) {
      const auto it = rates.find({m, s});
      const double rate = it == rates.end() ? 0.0 : it->second;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - rate)))));
    }
  }
  return out;
}

void emit_heatmap(const PhaseGrid& grid, const std::filesystem::path& path) {
  write_text(path, format_heatmap(grid));
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  GridSpec spec;
  try {
    spec.m_values = j.at("m_values").get<std::vector<Eigen::Index>>();
    if (j.contains("kn_pairs")) {
      for (const auto& p : j.at("kn_pairs")) {
        if (!p.is_array() || p.size() != 2) throw IoError("kn_pairs entries must be [k, n]");
        spec.kn_pairs.emplace_back(p[0].get<Eigen::Index>(), p[1].get<Eigen::Index>());
      }
    }
    if (j.contains("kn_sums")) {
      for (const auto& p : balanced_pairs(j.at("kn_sums").get<std::vector<Eigen::Index>>())) {
        spec.kn_pairs.push_back(p);
      }
    }
    if (spec.kn_pairs.empty()) throw IoError("grid spec needs kn_pairs or kn_sums");
    if (j.contains("trials_per_cell")) spec.trials_per_cell = j.at("trials_per_cell").get<int>();
    if (j.contains("master_seed")) spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("solver")) spec.solver = config_from_json(j.at("solver"));
    if (j.contains("model")) spec.model = parse_ensemble_model(j.at("model").get<std::string>());
    if (j.contains("subspace_b")) {
      spec.subspace_b = parse_subspace_kind(j.at("subspace_b").get<std::string>());
    }
    if (j.contains("subspace_c")) {
      spec.subspace_c = parse_subspace_kind(j.at("subspace_c").get<std::string>());
    }
    if (j.contains("success_threshold")) {
      spec.success_threshold = j.at("success_threshold").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed grid spec: ") + e.what());
  }
  return spec;
}

nlohmann::json grid_spec_to_json(const GridSpec& spec) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [k, n] : spec.kn_pairs) pairs.push_back({k, n});
  return {{"m_values", spec.m_values},
          {"kn_pairs", pairs},
          {"trials_per_cell", spec.trials_per_cell},
          {"master_seed", spec.master_seed},
          {"solver", config_to_json(spec.solver)},
          {"model", to_string(spec.model)},
          {"subspace_b", to_string(spec.subspace_b)},
          {"subspace_c", to_string(spec.subspace_c)},
          {"success_threshold", spec.success_threshold}};
}

nlohmann::json manifest_json(const PhaseGrid& grid) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, c] : grid.cells) {
    const auto& [m, k, n] = key;
    nlohmann::json seeds = nlohmann::json::array();
    for (int t = 0; t < c.trials; ++t) seeds.push_back(trial_seed(grid.spec.master_seed, m, k, n, t));
    cells.push_back({{"m", m},
                     {"k", k},
                     {"n", n},
                     {"trials", c.trials},
                     {"successes", c.successes},
                     {"numerical_failures", c.numerical_failures},
                     {"nonconverged", c.nonconverged},
                     {"seeds", seeds}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : grid.records) {
    if (r.status == TrialStatus::NumericalFailure) {
      failures.push_back({{"m", r.m}, {"k", r.k}, {"n", r.n}, {"trial", r.trial},
                          {"message", r.message}});
    }
  }
  nlohmann::json j;
  j["library_version"] = kLibraryVersion;
  j["rng"] = Rng::kName;
  j["seed_mixing"] =
      "splitmix64 fold: s = splitmix64(master_seed); s = splitmix64(s ^ w) for w in (m, k, n, trial)";
  j["kn_combination_rule"] = "cells are exactly the listed (k, n) pairs; kn_sums expand to (floor(s/2), s - floor(s/2))";
  j["success_rule"] = "converged and lifted relative error < success_threshold";
  j["spec"] = grid_spec_to_json(grid.spec);
  j["cells"] = std::move(cells);
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace bdpr

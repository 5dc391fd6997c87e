#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bdpr/error.hpp"
#include "bdpr/experiments.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdpr;

namespace {

PhaseGrid handmade_grid() {
  PhaseGrid g;
  g.spec.trials_per_cell = 4;
  g.cells[{10, 1, 2}] = {4, 4, 0, 0, 0.001, 12.5};
  g.cells[{10, 2, 2}] = {4, 1, 0, 1, 0.5, 100.0};
  g.cells[{10, 1, 3}] = {4, 3, 0, 0, 0.25, 50.0};
  g.cells[{20, 2, 2}] = {4, 0, 4, 0, std::nan(""), std::nan("")};
  return g;
}

GridSpec tiny_spec() {
  GridSpec s;
  s.m_values = {24, 48};
  s.kn_pairs = {{1, 1}, {2, 2}};
  s.trials_per_cell = 3;
  s.master_seed = 5;
  return s;
}

}  // namespace

TEST_CASE("balanced pairs and trial seeds") {
  const auto p = balanced_pairs({4, 5, 2});
  REQUIRE(p.size() == 3);
  CHECK(p[0] == std::pair<Eigen::Index, Eigen::Index>{2, 2});
  CHECK(p[1] == std::pair<Eigen::Index, Eigen::Index>{2, 3});
  CHECK(p[2] == std::pair<Eigen::Index, Eigen::Index>{1, 1});
  CHECK_THROWS_AS(balanced_pairs({1}), InvalidArgument);
  CHECK(trial_seed(1, 40, 2, 2, 0) == mix_seed(1, {40, 2, 2, 0}));
  CHECK(trial_seed(1, 40, 2, 2, 0) != trial_seed(1, 40, 2, 2, 1));
  CHECK(trial_seed(1, 40, 2, 3, 0) != trial_seed(1, 40, 3, 2, 0));
}

TEST_CASE("CSV layout, ordering and round trip") {
  const PhaseGrid g = handmade_grid();
  const std::string csv = format_csv(g);
  const std::string expected =
      "m,k,n,kn_sum,trials,successes,rate,mean_error,mean_iters\n"
      "10,1,2,3,4,4,1.000000,0.001,12.5\n"
      "10,1,3,4,4,3,0.750000,0.25,50\n"
      "10,2,2,4,4,1,0.250000,0.5,100\n"
      "20,2,2,4,4,0,0.000000,nan,nan\n";
  CHECK(csv == expected);
  const auto back = parse_csv(csv);
  REQUIRE(back.size() == 4);
  CHECK(back.at({10, 1, 3}).successes == 3);
  CHECK(back.at({10, 1, 3}).rate == 0.75);
  CHECK(std::isnan(back.at({20, 2, 2}).mean_error));
  CHECK_THROWS_AS(parse_csv("a,b\n"), IoError);
  CHECK_THROWS_AS(parse_csv("m,k,n,kn_sum,trials,successes,rate,mean_error,mean_iters\n1,2\n"), IoError);
}

TEST_CASE("PGM heatmap bytes") {
  const PhaseGrid g = handmade_grid();
  // columns k+n = 3, 4; rows m = 10, 20.
  // (10,3): rate 1 → 0; (10,4): mean(0.75, 0.25) = 0.5 → 128;
  // (20,3): no cell → 255; (20,4): rate 0 → 255.
  std::string expected = "P5\n2 2\n255\n";
  expected += static_cast<char>(0);
  expected += static_cast<char>(128);
  expected += static_cast<char>(255);
  expected += static_cast<char>(255);
  CHECK(format_heatmap(g) == expected);
  CHECK_THROWS_AS(format_heatmap(PhaseGrid{}), InvalidArgument);
}

TEST_CASE("spearman against the rank oracle") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> y{0.1, 0.1, 0.4, 0.3, 0.9, 0.9};
  CHECK(spearman(x, y) == doctest::Approx(oracle::spearman(x, y)).epsilon(1e-12));
  CHECK(spearman(x, x) == doctest::Approx(1.0));
  CHECK(std::isnan(spearman(x, {1, 1, 1, 1, 1, 1})));
  CHECK(spearman({40, 80, 120, 160, 200}, {0, 0, 0, 0, 0.4}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(spearman({1, 2}, {1}), InvalidArgument);
}

TEST_CASE("monotonicity flags constant series") {
  PhaseGrid g;
  g.spec.trials_per_cell = 10;
  for (Eigen::Index m : {10, 20, 30}) {
    g.cells[{m, 1, 1}] = {10, 10, 0, 0, 0, 0};
    g.cells[{m, 2, 2}] = {10, static_cast<int>(m / 10), 0, 0, 0, 0};
  }
  const auto checks = monotonicity(g);
  REQUIRE(checks.size() == 2);
  CHECK(checks[0].constant);
  CHECK(std::isnan(checks[0].rho));
  CHECK_FALSE(checks[1].constant);
  CHECK(checks[1].rho == doctest::Approx(1.0));
}

TEST_CASE("boundary fit separates a synthetic transition at a known constant") {
  const double c0 = 2.0;
  PhaseGrid g;
  g.spec.trials_per_cell = 10;
  double max_ok = 0.0, min_bad = INFINITY;
  for (Eigen::Index m = 40; m <= 400; m += 40) {
    for (Eigen::Index s = 2; s <= 30; s += 2) {
      const double lm = std::log(static_cast<double>(m));
      const double load = s * lm * lm / static_cast<double>(m);
      const bool ok = load <= c0;
      (ok ? max_ok : min_bad) = ok ? std::max(max_ok, load) : std::min(min_bad, load);
      g.cells[{m, s / 2, s - s / 2}] = {10, ok ? 10 : 0, 0, 0, 0, 0};
    }
  }
  const BoundaryFit fit = fit_boundary(g);
  CHECK(fit.accuracy == 1.0);
  CHECK(fit.cells == 150);
  CHECK(fit.c >= max_ok);
  CHECK(fit.c <= min_bad);
  CHECK(fit.sharpness > 0.0);
}

TEST_CASE("phase grid output does not depend on the thread count") {
  const GridSpec spec = tiny_spec();
  const PhaseGrid a = run_phase_grid(spec, 1);
  const PhaseGrid b = run_phase_grid(spec, 4);
  CHECK(format_csv(a) == format_csv(b));
  CHECK(format_heatmap(a) == format_heatmap(b));
  CHECK(manifest_json(a).dump() == manifest_json(b).dump());
  CHECK(a.records.size() == 12);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == b.records[i].seed);
    CHECK(a.records[i].error == b.records[i].error);
  }
}

TEST_CASE("trials with k or n above m are skipped, records carry metrics") {
  GridSpec spec = tiny_spec();
  spec.m_values = {3, 40};
  spec.kn_pairs = {{2, 4}, {2, 2}};
  spec.trials_per_cell = 2;
  const PhaseGrid g = run_phase_grid(spec, 2);
  CHECK(g.cells.count({3, 2, 4}) == 0);
  CHECK(g.cells.count({40, 2, 4}) == 1);
  for (const auto& r : g.records) {
    CHECK(r.status == TrialStatus::Solved);
    CHECK(r.success == (r.converged && r.error < spec.success_threshold));
    CHECK(r.trace_H > 0.0);
  }
}

TEST_CASE("grid specs load from JSON and validate") {
  const auto spec = grid_spec_from_json(
      nlohmann::json::parse(R"({"m_values":[40,80],"kn_sums":[4,5],"kn_pairs":[[1,2]],
      "trials_per_cell":3,"master_seed":9,"model":"fourier-convolution",
      "subspace_b":"partial-identity","solver":{"rho1":0.5}})"));
  CHECK(spec.kn_pairs.size() == 3);
  CHECK(spec.kn_pairs[0] == std::pair<Eigen::Index, Eigen::Index>{1, 2});
  CHECK(spec.model == EnsembleModel::FourierConvolution);
  CHECK(spec.subspace_b == SubspaceKind::PartialIdentity);
  CHECK(spec.solver.rho1 == 0.5);
  const auto again = grid_spec_from_json(grid_spec_to_json(spec));
  CHECK(grid_spec_to_json(again) == grid_spec_to_json(spec));

  CHECK_THROWS_AS(grid_spec_from_json(nlohmann::json::parse(R"({"kn_sums":[4]})")), IoError);
  CHECK_THROWS_AS(grid_spec_from_json(nlohmann::json::parse(R"({"m_values":[40]})")), IoError);
  GridSpec bad = spec;
  bad.m_values = {80, 40};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = spec;
  bad.trials_per_cell = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("manifest records provenance") {
  const PhaseGrid g = run_phase_grid(tiny_spec(), 1);
  const auto j = manifest_json(g);
  CHECK(j.at("library_version") == std::string(kLibraryVersion));
  CHECK(j.at("rng") == std::string(Rng::kName));
  CHECK(j.at("cells").size() == 4);
  CHECK(j["cells"][0]["seeds"][1] == trial_seed(5, 24, 1, 1, 1));
  CHECK(j.at("failures").empty());
}

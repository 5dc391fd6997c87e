#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bdpr/error.hpp"
#include "bdpr/experiments.hpp"

namespace bdpr {

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[idx[p]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

// (k+n)·log²m / m; success is predicted when this is at most c.
double load_ratio(Eigen::Index m, Eigen::Index k, Eigen::Index n) {
  const double lm = std::log(static_cast<double>(m));
  return static_cast<double>(k + n) * lm * lm / static_cast<double>(m);
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: length mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return pearson(average_ranks(x), average_ranks(y));
}

std::vector<MonotonicityCheck> monotonicity(const PhaseGrid& grid) {
  std::map<std::pair<Eigen::Index, Eigen::Index>, std::pair<std::vector<double>, std::vector<double>>>
      series;
  for (const auto& [key, c] : grid.cells) {
    const auto& [m, k, n] = key;
    auto& s = series[{k, n}];
    s.first.push_back(static_cast<double>(m));
    s.second.push_back(static_cast<double>(c.successes) / static_cast<double>(c.trials));
  }
  std::vector<MonotonicityCheck> out;
  for (const auto& [kn, s] : series) {
    const bool constant =
        std::all_of(s.second.begin(), s.second.end(), [&](double r) { return r == s.second.front(); });
    out.push_back({kn.first, kn.second, spearman(s.first, s.second), constant});
  }
  return out;
}

BoundaryFit fit_boundary(const PhaseGrid& grid) {
  struct Obs {
    double x;  // log load ratio
    double successes;
    double trials;
    bool success_cell;
  };
  std::vector<Obs> obs;
  for (const auto& [key, c] : grid.cells) {
    const auto& [m, k, n] = key;
    if (m < 2) continue;  // log m = 0
    const double rate = static_cast<double>(c.successes) / static_cast<double>(c.trials);
    obs.push_back({std::log(load_ratio(m, k, n)), static_cast<double>(c.successes),
                   static_cast<double>(c.trials), rate >= 0.5});
  }
  if (obs.empty()) throw InvalidArgument("fit_boundary: no cells");

  // P(success) = σ(a − s·x); minimize binomial NLL + ridge·s² + tiny·a².
  constexpr double kRidgeSlope = 1e-3;
  constexpr double kRidgeIntercept = 1e-8;
  auto objective = [&](double a, double s) {
    double f = kRidgeSlope * s * s + kRidgeIntercept * a * a;
    for (const auto& o : obs) {
      const double z = a - s * o.x;
      // −[S log σ(z) + (N − S) log σ(−z)], with log σ(z) = −log1p(e^{−z})
      const double log_sig = z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
      const double log_sig_neg = log_sig - z;
      f -= o.successes * log_sig + (o.trials - o.successes) * log_sig_neg;
    }
    return f;
  };

  double a = 0.0;
  double s = 1.0;
  double f = objective(a, s);
  for (int it = 0; it < 200; ++it) {
    double ga = 2.0 * kRidgeIntercept * a;
    double gs = 2.0 * kRidgeSlope * s;
    double haa = 2.0 * kRidgeIntercept, has = 0.0, hss = 2.0 * kRidgeSlope;
    for (const auto& o : obs) {
      const double z = a - s * o.x;
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double r = o.trials * p - o.successes;  // dNLL/dz
      const double w = o.trials * p * (1.0 - p);
      ga += r;
      gs -= r * o.x;
      haa += w;
      has -= w * o.x;
      hss += w * o.x * o.x;
    }
    const double det = haa * hss - has * has;
    if (!(det > 0.0)) break;
    const double da = -(hss * ga - has * gs) / det;
    const double ds = -(haa * gs - has * ga) / det;
    double step = 1.0;
    double fa = a, fs = s, fnew = f;
    for (int ls = 0; ls < 40; ++ls) {
      fa = a + step * da;
      fs = s + step * ds;
      fnew = objective(fa, fs);
      if (fnew <= f) break;
      step *= 0.5;
    }
    if (!(fnew <= f)) break;
    const bool done = std::abs(f - fnew) <= 1e-12 * std::max(1.0, std::abs(f));
    a = fa;
    s = fs;
    f = fnew;
    if (done) break;
  }

  BoundaryFit fit{};
  fit.sharpness = s;
  fit.cells = static_cast<int>(obs.size());
  fit.c = s > 0.0 ? std::exp(a / s) : std::numeric_limits<double>::quiet_NaN();
  int correct = 0;
  for (const auto& o : obs) {
    const bool predicted = s > 0.0 && o.x <= a / s;
    if (predicted == o.success_cell) ++correct;
  }
  fit.accuracy = static_cast<double>(correct) / static_cast<double>(obs.size());
  return fit;
}

}  // namespace bdpr

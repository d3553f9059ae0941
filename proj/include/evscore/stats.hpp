// evscore/stats.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EVSCORE_STATS_HPP
#define EVSCORE_STATS_HPP

// Cross-metric and cross-system statistics over per-patient score vectors:
// Pearson correlation with a Fisher-z p-value, a two-sample two-tailed
// z-test, and a one-sample Kolmogorov-Smirnov normality check against a
// normal fitted by sample mean and deviation.  The KS p-value uses the
// asymptotic distribution; with fitted parameters it is conservative
// (Lilliefors-corrected critical values are not applied).

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evscore {

struct ScoreVector {
  std::vector<std::string> patients;
  std::vector<std::optional<double>> values;  // aligned with patients
};

struct PearsonResult {
  double r = 0.0;
  double p = 1.0;
  int n = 0;
};

struct ZTestResult {
  double z = 0.0;
  double p = 1.0;
  bool significant = false;
};

struct KsResult {
  double d = 0.0;
  double p = 1.0;
  int n = 0;
};

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double two_tailed_p(double z) {
  return 2.0 * (1.0 - normal_cdf(std::abs(z)));
}

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Asymptotic Kolmogorov survival function Q(lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace detail

inline PearsonResult pearson_r(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson_r: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("pearson_r: need >= 3 pairs");
  double mx = detail::mean_of(x), my = detail::mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson_r: zero variance");
  PearsonResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (n > 3 && std::abs(res.r) < 1.0) {
    double z = std::atanh(res.r) * std::sqrt(static_cast<double>(n - 3));
    res.p = two_tailed_p(z);
  } else if (std::abs(res.r) == 1.0) {
    res.p = 0.0;
  } else {
    res.p = 1.0;  // n == 3: the Fisher approximation carries no information
  }
  return res;
}

inline ZTestResult z_test(const std::vector<double>& a,
                          const std::vector<double>& b, double alpha = 0.05) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("z_test: need >= 2 values per sample");
  double ma = detail::mean_of(a), mb = detail::mean_of(b);
  double va = detail::sample_variance(a, ma);
  double vb = detail::sample_variance(b, mb);
  double se = std::sqrt(va / static_cast<double>(a.size()) +
                        vb / static_cast<double>(b.size()));
  ZTestResult res;
  if (se == 0.0) {
    if (ma == mb)
      throw std::invalid_argument("z_test: degenerate variance, equal means");
    res.z = ma > mb ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
    res.p = 0.0;
  } else {
    res.z = (ma - mb) / se;
    res.p = two_tailed_p(res.z);
  }
  res.significant = res.p < alpha;
  return res;
}

inline KsResult ks_normality(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n < 5) throw std::invalid_argument("ks_normality: need >= 5 values");
  double mean = detail::mean_of(x);
  double sd = std::sqrt(detail::sample_variance(x, mean));
  if (sd == 0.0) throw std::invalid_argument("ks_normality: zero variance");

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = normal_cdf((sorted[i] - mean) / sd);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  KsResult res;
  res.d = d;
  res.n = n;
  double sn = std::sqrt(static_cast<double>(n));
  res.p = detail::kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return res;
}

// Pairwise deletion: keep indices where both vectors are defined.
inline std::pair<std::vector<double>, std::vector<double>> paired_defined(
    const ScoreVector& x, const ScoreVector& y) {
  if (x.values.size() != y.values.size())
    throw std::invalid_argument("score vectors are not patient-aligned");
  std::vector<double> xs, ys;
  for (size_t i = 0; i < x.values.size(); ++i)
    if (x.values[i] && y.values[i]) {
      xs.push_back(*x.values[i]);
      ys.push_back(*y.values[i]);
    }
  return {std::move(xs), std::move(ys)};
}

inline std::vector<double> defined_values(const ScoreVector& x) {
  std::vector<double> out;
  for (const auto& v : x.values)
    if (v) out.push_back(*v);
  return out;
}

inline PearsonResult pearson_r(const ScoreVector& x, const ScoreVector& y) {
  auto [xs, ys] = paired_defined(x, y);
  return pearson_r(xs, ys);
}

inline ZTestResult z_test(const ScoreVector& a, const ScoreVector& b,
                          double alpha = 0.05) {
  return z_test(defined_values(a), defined_values(b), alpha);
}

inline KsResult ks_normality(const ScoreVector& x) {
  return ks_normality(defined_values(x));
}

// Text grid in the style of a pairwise correlation table: cell (i,j) holds
// "r (p < .. )" for names i and j.
inline std::string render_correlation_matrix(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::optional<PearsonResult>>>& cells) {
  std::ostringstream os;
  size_t width = 18;
  os << std::left << std::setw(10) << "";
  for (const auto& n : names) os << std::setw(width) << n;
  os << "\n";
  for (size_t i = 0; i < names.size(); ++i) {
    os << std::left << std::setw(10) << names[i];
    for (size_t j = 0; j < names.size(); ++j) {
      std::string cell = "---";
      if (i != j && cells[i][j]) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(2) << cells[i][j]->r << " (p=";
        c << std::setprecision(3) << cells[i][j]->p << ")";
        cell = c.str();
      }
      os << std::setw(width) << cell;
    }
    os << "\n";
  }
  return os.str();
}

// Text grid in the style of a pairwise significance table: cell (i,j) holds
// the absolute mean difference and a Y/N significance verdict.
inline std::string render_significance_grid(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::optional<ZTestResult>>>& cells,
    const std::vector<std::optional<double>>& means) {
  std::ostringstream os;
  size_t width = 16;
  os << std::left << std::setw(22) << "";
  for (const auto& n : names) os << std::setw(width) << n;
  os << "\n";
  for (size_t i = 0; i < names.size(); ++i) {
    std::ostringstream rowname;
    rowname << names[i];
    if (means[i]) {
      rowname << " (" << std::fixed << std::setprecision(2)
              << 100.0 * *means[i] << "%)";
    }
    os << std::left << std::setw(22) << rowname.str();
    for (size_t j = 0; j < names.size(); ++j) {
      std::string cell = "---";
      if (i != j && cells[i][j] && means[i] && means[j]) {
        std::ostringstream c;
        c << "(" << std::fixed << std::setprecision(2)
          << 100.0 * std::abs(*means[i] - *means[j]) << "%) "
          << (cells[i][j]->significant ? "Y" : "N");
        cell = c.str();
      }
      os << std::setw(width) << cell;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace evscore

#endif  // EVSCORE_STATS_HPP

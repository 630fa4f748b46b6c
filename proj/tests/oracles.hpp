// Copyright 2026, The driftstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Naive Bayes posterior by direct counting over the training list.

struct Row {
  std::vector<int> cats;
  std::vector<double> nums;
  int y = 0;
};

inline std::vector<double> nb_posterior(const std::vector<Row>& train, const std::vector<int>& cardinalities,
                                        int n_classes, const Row& probe, double alpha = 1.0,
                                        double var_floor = 1e-9) {
  const double n = static_cast<double>(train.size());
  std::vector<double> log_score(n_classes, 0.0);
  for (int c = 0; c < n_classes; ++c) {
    std::vector<const Row*> members;
    for (const auto& r : train)
      if (r.y == c) members.push_back(&r);
    const double nc = static_cast<double>(members.size());
    double prior = nc > 0 ? nc / n : alpha / (n + alpha * n_classes);
    double lp = std::log(prior);
    for (std::size_t f = 0; f < probe.cats.size(); ++f) {
      double hits = 0;
      for (const Row* r : members) hits += r->cats[f] == probe.cats[f];
      lp += std::log((hits + alpha) / (nc + alpha * cardinalities[f]));
    }
    for (std::size_t f = 0; f < probe.nums.size(); ++f) {
      double mean = 0.0;
      for (const Row* r : members) mean += r->nums[f];
      if (nc > 0) mean /= nc;
      double var = var_floor;
      if (nc >= 2) {
        double ss = 0.0;
        for (const Row* r : members) ss += (r->nums[f] - mean) * (r->nums[f] - mean);
        var = std::max(ss / (nc - 1), var_floor);
      }
      const double d = probe.nums[f] - mean;
      lp += -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
    }
    log_score[c] = lp;
  }
  const double top = *std::max_element(log_score.begin(), log_score.end());
  double z = 0.0;
  for (double& s : log_score) z += (s = std::exp(s - top));
  for (double& s : log_score) s /= z;
  return log_score;
}

// ---------------------------------------------------------------------------
// Page-Hinkley written straight from the recurrence. Returns the 0-based
// positions of alarms; state restarts after each alarm.

inline std::vector<std::size_t> page_hinkley_alarms(const std::vector<double>& xs, double delta, double lambda,
                                                    long burn_in) {
  std::vector<std::size_t> alarms;
  long t = 0;
  double sum = 0.0, m = 0.0, m_min = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ++t;
    sum += xs[i];
    const double mean = sum / static_cast<double>(t);
    m += xs[i] - mean - delta;
    m_min = std::min(m_min, m);
    if (t > burn_in && m - m_min > lambda) {
      alarms.push_back(i);
      t = 0;
      sum = m = m_min = 0.0;
    }
  }
  return alarms;
}

// ---------------------------------------------------------------------------
// ADWIN over a flat, oldest-first list of (size, sum) buckets.

class ReferenceAdwin {
 public:
  ReferenceAdwin(double delta, int max_buckets, int check_period, int min_subwindow)
      : delta_(delta), max_buckets_(max_buckets), period_(check_period), min_side_(min_subwindow) {}

  bool observe(double x) {
    buckets_.push_back({1, x});
    for (long size = 1;; size *= 2) {
      std::vector<std::size_t> same;
      for (std::size_t i = 0; i < buckets_.size(); ++i)
        if (buckets_[i].first == size) same.push_back(i);
      if (static_cast<int>(same.size()) <= max_buckets_) break;
      const std::size_t a = same[0];
      buckets_[a] = {2 * size, buckets_[a].second + buckets_[a + 1].second};
      buckets_.erase(buckets_.begin() + static_cast<long>(a) + 1);
    }
    if (++ticks_ % period_ != 0) return false;
    bool drift = false;
    while (cut_exists()) {
      buckets_.pop_front();
      drift = true;
    }
    return drift;
  }

  long width() const {
    long w = 0;
    for (const auto& b : buckets_) w += b.first;
    return w;
  }
  double mean() const {
    double s = 0.0;
    for (const auto& b : buckets_) s += b.second;
    return width() ? s / static_cast<double>(width()) : 0.0;
  }

 private:
  bool cut_exists() const {
    const long w = width();
    double total = 0.0;
    for (const auto& b : buckets_) total += b.second;
    long n0 = 0;
    double s0 = 0.0;
    for (std::size_t i = 0; i + 1 < buckets_.size(); ++i) {
      n0 += buckets_[i].first;
      s0 += buckets_[i].second;
      const long n1 = w - n0;
      if (n0 < min_side_ || n1 < min_side_) continue;
      const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
      const double eps = std::sqrt(std::log(4.0 * w / delta_) / (2.0 * m));
      if (std::abs(s0 / n0 - (total - s0) / n1) >= eps) return true;
    }
    return false;
  }

  double delta_;
  int max_buckets_, period_, min_side_;
  long ticks_ = 0;
  std::deque<std::pair<long, double>> buckets_;
};

// ---------------------------------------------------------------------------
// Linear-interpolation quantile via nth_element on a copy.

inline double quantile(std::vector<double> v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(lo), v.end());
  const double a = v[lo];
  if (lo + 1 >= v.size()) return a;
  const double b = *std::min_element(v.begin() + static_cast<long>(lo) + 1, v.end());
  return a + (pos - static_cast<double>(lo)) * (b - a);
}

// ---------------------------------------------------------------------------
// Box-Cox profile log-likelihood, two-pass, and its argmax on a grid.

inline double boxcox_loglik(const std::vector<double>& x, double lambda) {
  std::vector<double> y(x.size());
  double log_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    log_sum += std::log(x[i]);
    y[i] = lambda == 0.0 ? std::log(x[i]) : (std::pow(x[i], lambda) - 1.0) / lambda;
  }
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return -0.5 * n * std::log(ss / n) + (lambda - 1.0) * log_sum;
}

inline double boxcox_grid_argmax(const std::vector<double>& x, double lo, double hi, double step) {
  double best = lo, best_ll = -INFINITY;
  for (double l = lo; l <= hi + 1e-12; l += step) {
    const double ll = boxcox_loglik(x, l);
    if (ll > best_ll) {
      best_ll = ll;
      best = l;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Bayes rates of naive-Bayes generative concepts with equiprobable classes,
// by enumeration over every category combination and a fine grid over one
// Gaussian (sd 1) numeric feature.

struct GenerativeModel {
  std::vector<std::vector<std::vector<double>>> probs;  // [feature][class][category]
  std::vector<std::vector<double>> means;               // [numeric][class], at most one numeric
};

struct BayesRates {
  double own = 0.0;    // accuracy of the Bayes rule of `a` on data from `a`
  double cross = 0.0;  // accuracy of the Bayes rule of `a` on data from `b`
  double b_own = 0.0;  // accuracy of the Bayes rule of `b` on data from `b`
};

inline BayesRates bayes_rates(const GenerativeModel& a, const GenerativeModel& b) {
  const std::size_t nf = a.probs.size();
  const int k = static_cast<int>(a.probs[0].size());
  std::vector<double> grid{0.0}, weight{1.0};
  if (!a.means.empty()) {
    double lo = 0, hi = 0;
    for (const auto* m : {&a.means[0], &b.means[0]})
      for (double v : *m) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    lo -= 8.0;
    hi += 8.0;
    const int steps = 400;
    const double h = (hi - lo) / steps;
    grid.clear();
    weight.clear();
    for (int i = 0; i < steps; ++i) {
      grid.push_back(lo + (i + 0.5) * h);
      weight.push_back(h);
    }
  }
  auto density = [](double z, double mu) { return std::exp(-0.5 * (z - mu) * (z - mu)) / std::sqrt(2.0 * M_PI); };
  std::vector<std::vector<double>> da(grid.size(), std::vector<double>(k, 1.0)), db = da;
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (int c = 0; c < k; ++c) {
      if (!a.means.empty()) da[g][c] = density(grid[g], a.means[0][c]);
      if (!b.means.empty()) db[g][c] = density(grid[g], b.means[0][c]);
    }

  BayesRates r;
  std::vector<int> combo(nf, 0);
  std::vector<double> pa(k), pb(k), va(k), vb(k);
  while (true) {
    for (int c = 0; c < k; ++c) {
      pa[c] = pb[c] = 1.0 / k;
      for (std::size_t f = 0; f < nf; ++f) {
        pa[c] *= a.probs[f][c][combo[f]];
        pb[c] *= b.probs[f][c][combo[f]];
      }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      int best_a = 0, best_b = 0;
      double va_best = -1, vb_best = -1;
      for (int c = 0; c < k; ++c) {
        va[c] = pa[c] * da[g][c];
        vb[c] = pb[c] * db[g][c];
        if (va[c] > va_best) va_best = va[best_a = c];
        if (vb[c] > vb_best) vb_best = vb[best_b = c];
      }
      r.own += weight[g] * va[best_a];
      r.cross += weight[g] * vb[best_a];
      r.b_own += weight[g] * vb[best_b];
    }
    std::size_t f = 0;
    while (f < nf && ++combo[f] == static_cast<int>(a.probs[f][0].size())) combo[f++] = 0;
    if (f == nf) break;
  }
  return r;
}

}  // namespace oracle

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

#include "driftstream/detectors.hpp"

#include <cmath>

#include "driftstream/error.hpp"

namespace driftstream {

namespace {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("detector input must lie in [0, 1]");
}

}  // namespace

PageHinkley::PageHinkley(Params params) : params_(params) {
  if (!(params_.delta >= 0.0)) throw ConfigError("Page-Hinkley delta must be >= 0");
  if (!(params_.lambda > 0.0)) throw ConfigError("Page-Hinkley lambda must be > 0");
  if (params_.burn_in < 0) throw ConfigError("Page-Hinkley burn-in must be >= 0");
}

DetectorSignal PageHinkley::observe(double x) {
  check_unit_interval(x);
  ++t_;
  mean_ += (x - mean_) / static_cast<double>(t_);
  m_ += x - mean_ - params_.delta;
  if (m_ < m_min_) m_min_ = m_;
  if (t_ > params_.burn_in && m_ - m_min_ > params_.lambda) return DetectorSignal::drift;
  return DetectorSignal::no_change;
}

void PageHinkley::reset() {
  t_ = 0;
  mean_ = 0.0;
  m_ = 0.0;
  m_min_ = 0.0;
}

// ---------------------------------------------------------------------------

Adwin::Adwin(Params params) : params_(params) {
  if (!(params_.delta > 0.0 && params_.delta < 1.0)) throw ConfigError("ADWIN delta must lie in (0, 1)");
  if (params_.max_buckets < 1) throw ConfigError("ADWIN max_buckets must be >= 1");
  if (params_.check_period < 1) throw ConfigError("ADWIN check period must be >= 1");
  if (params_.min_subwindow < 1) throw ConfigError("ADWIN minimum sub-window must be >= 1");
}

DetectorSignal Adwin::observe(double x) {
  check_unit_interval(x);
  insert(x);
  compress();
  ++ticks_;
  if (ticks_ % params_.check_period != 0) return DetectorSignal::no_change;
  bool drift = false;
  while (find_cut()) {
    drop_oldest();
    drift = true;
  }
  return drift ? DetectorSignal::drift : DetectorSignal::no_change;
}

void Adwin::reset() {
  rows_.clear();
  width_ = 0;
  total_ = 0.0;
  ticks_ = 0;
  dropped_ = 0;
  last_cut_diff_ = 0.0;
}

void Adwin::insert(double x) {
  if (rows_.empty()) rows_.emplace_back();
  rows_[0].push_back(x);
  ++width_;
  total_ += x;
}

void Adwin::compress() {
  const auto limit = static_cast<std::size_t>(params_.max_buckets);
  for (std::size_t r = 0; r < rows_.size() && rows_[r].size() > limit; ++r) {
    const double merged = rows_[r][0] + rows_[r][1];
    rows_[r].pop_front();
    rows_[r].pop_front();
    if (r + 1 == rows_.size()) rows_.emplace_back();
    rows_[r + 1].push_back(merged);
  }
}

bool Adwin::find_cut() {
  const auto min_side = static_cast<std::int64_t>(params_.min_subwindow);
  if (width_ < 2 * min_side) return false;
  const double log_term = std::log(4.0 * static_cast<double>(width_) / params_.delta);
  std::int64_t n0 = 0;
  double u0 = 0.0;
  for (std::size_t r = rows_.size(); r-- > 0;) {
    const std::int64_t size = std::int64_t{1} << r;
    for (double bucket_sum : rows_[r]) {
      n0 += size;
      u0 += bucket_sum;
      const std::int64_t n1 = width_ - n0;
      if (n1 < min_side) return false;
      if (n0 < min_side) continue;
      const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
      const double eps = std::sqrt(log_term / (2.0 * m));
      const double diff = std::abs(u0 / static_cast<double>(n0) - (total_ - u0) / static_cast<double>(n1));
      if (diff >= eps) {
        last_cut_diff_ = diff;
        return true;
      }
    }
  }
  return false;
}

void Adwin::drop_oldest() {
  const std::size_t r = rows_.size() - 1;
  const std::int64_t size = std::int64_t{1} << r;
  width_ -= size;
  total_ -= rows_[r].front();
  dropped_ += size;
  rows_[r].pop_front();
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

// ---------------------------------------------------------------------------

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::page_hinkley:
      return "page-hinkley";
    case DetectorKind::adwin:
      return "adwin";
    case DetectorKind::none:
      break;
  }
  return "none";
}

DetectorKind parse_detector_kind(std::string_view name) {
  if (name == "none") return DetectorKind::none;
  if (name == "page-hinkley" || name == "page_hinkley" || name == "ph") return DetectorKind::page_hinkley;
  if (name == "adwin") return DetectorKind::adwin;
  throw ConfigError("unknown detector '" + std::string(name) + "'");
}

Detector::Detector(const DetectorConfig& config) {
  switch (config.kind) {
    case DetectorKind::page_hinkley:
      state_.emplace<PageHinkley>(config.page_hinkley);
      break;
    case DetectorKind::adwin:
      state_.emplace<Adwin>(config.adwin);
      break;
    case DetectorKind::none:
      break;
  }
}

DetectorSignal Detector::observe(double x) {
  if (auto* ph = std::get_if<PageHinkley>(&state_)) return ph->observe(x);
  if (auto* ad = std::get_if<Adwin>(&state_)) return ad->observe(x);
  return DetectorSignal::no_change;
}

void Detector::reset() {
  if (auto* ph = std::get_if<PageHinkley>(&state_)) ph->reset();
  if (auto* ad = std::get_if<Adwin>(&state_)) ad->reset();
}

double Detector::statistic() const {
  if (const auto* ph = std::get_if<PageHinkley>(&state_)) return ph->statistic();
  if (const auto* ad = std::get_if<Adwin>(&state_)) return ad->statistic();
  return 0.0;
}

DetectorKind Detector::kind() const {
  if (std::holds_alternative<PageHinkley>(state_)) return DetectorKind::page_hinkley;
  if (std::holds_alternative<Adwin>(state_)) return DetectorKind::adwin;
  return DetectorKind::none;
}

}  // namespace driftstream

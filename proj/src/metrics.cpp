#include "lockss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lockss {

double access_failure(const RunTrace& t) {
  if (t.replicas() == 0 || t.horizon <= 0) return 0.0;
  return static_cast<double>(t.damaged_time) / (static_cast<double>(t.replicas()) * static_cast<double>(t.horizon));
}

double access_failure(std::span<const std::vector<Interval>> damage, SimTime horizon) {
  if (damage.empty() || horizon <= 0) return 0.0;
  long double total = 0;
  for (const auto& list : damage) {
    std::vector<Interval> ivs;
    for (Interval iv : list) {
      iv.start = std::max<SimTime>(iv.start, 0);
      iv.end = std::min(iv.end, horizon);
      if (iv.end > iv.start) ivs.push_back(iv);
    }
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
    SimTime cur_s = 0, cur_e = -1;
    for (const Interval& iv : ivs) {
      if (iv.start > cur_e) {
        if (cur_e > cur_s) total += cur_e - cur_s;
        cur_s = iv.start;
        cur_e = iv.end;
      } else {
        cur_e = std::max(cur_e, iv.end);
      }
    }
    if (cur_e > cur_s) total += cur_e - cur_s;
  }
  return static_cast<double>(total / (static_cast<long double>(damage.size()) * horizon));
}

double mean_success_gap(const RunTrace& t) {
  const double horizon = to_days(t.horizon);
  if (!t.replica_successes.empty()) {
    double sum = 0;
    for (std::uint32_t k : t.replica_successes) sum += horizon / static_cast<double>(std::max<std::uint32_t>(k, 1));
    return sum / static_cast<double>(t.replica_successes.size());
  }
  if (t.successful_polls == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(t.replicas()) * horizon / static_cast<double>(t.successful_polls);
}

double delay_ratio(const RunTrace& attack, const RunTrace& baseline) {
  if (baseline.successful_polls == 0) return kNotApplicable;
  return mean_success_gap(attack) / mean_success_gap(baseline);
}

double friction(const RunTrace& attack, const RunTrace& baseline) {
  if (baseline.successful_polls == 0 || baseline.loyal.total() <= 0) return kNotApplicable;
  if (attack.successful_polls == 0) return std::numeric_limits<double>::infinity();
  const double a = attack.loyal.total() / static_cast<double>(attack.successful_polls);
  const double b = baseline.loyal.total() / static_cast<double>(baseline.successful_polls);
  return a / b;
}

double cost_ratio(const RunTrace& attack) {
  if (!attack.adversary_effortful) return kNotApplicable;
  if (attack.loyal.total() <= 0) return kNotApplicable;
  return attack.adversary.total() / attack.loyal.total();
}

MetricsRow metrics_row(const RunTrace& attack, const RunTrace& baseline) {
  MetricsRow r;
  r.access_failure = access_failure(attack);
  r.delay_ratio = delay_ratio(attack, baseline);
  r.friction = friction(attack, baseline);
  r.cost_ratio = cost_ratio(attack);
  r.alarms = static_cast<double>(attack.alarms);
  r.successful_polls = static_cast<double>(attack.successful_polls);
  r.loyal_effort = attack.loyal.total();
  r.adversary_effort = attack.adversary.total();
  r.busyness = attack.busyness;
  return r;
}

namespace {

double mean_of(std::span<const MetricsRow> rows, double MetricsRow::*f) {
  double s = 0;
  for (const auto& r : rows) s += r.*f;
  return s / static_cast<double>(rows.size());
}

double sum_of(std::span<const MetricsRow> rows, double MetricsRow::*f) {
  double s = 0;
  for (const auto& r : rows) s += r.*f;
  return s;
}

constexpr double MetricsRow::*kFields[] = {&MetricsRow::access_failure, &MetricsRow::delay_ratio,
                                           &MetricsRow::friction,       &MetricsRow::cost_ratio,
                                           &MetricsRow::alarms,         &MetricsRow::successful_polls,
                                           &MetricsRow::loyal_effort,   &MetricsRow::adversary_effort,
                                           &MetricsRow::busyness};

}  // namespace

MetricsRow combine_layers(std::span<const MetricsRow> layers) {
  MetricsRow r;
  if (layers.empty()) return r;
  r.access_failure = mean_of(layers, &MetricsRow::access_failure);
  r.delay_ratio = mean_of(layers, &MetricsRow::delay_ratio);
  r.friction = mean_of(layers, &MetricsRow::friction);
  r.cost_ratio = mean_of(layers, &MetricsRow::cost_ratio);
  r.busyness = mean_of(layers, &MetricsRow::busyness);
  r.alarms = sum_of(layers, &MetricsRow::alarms);
  r.successful_polls = sum_of(layers, &MetricsRow::successful_polls);
  r.loyal_effort = sum_of(layers, &MetricsRow::loyal_effort);
  r.adversary_effort = sum_of(layers, &MetricsRow::adversary_effort);
  return r;
}

MetricsSummary summarize(std::span<const MetricsRow> runs) {
  MetricsSummary s;
  if (runs.empty()) return s;
  for (auto f : kFields) {
    s.mean.*f = mean_of(runs, f);
    double lo = runs[0].*f, hi = runs[0].*f;
    for (const auto& r : runs) {
      lo = std::min(lo, r.*f);
      hi = std::max(hi, r.*f);
    }
    s.min.*f = lo;
    s.max.*f = hi;
  }
  return s;
}

namespace {
std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return kNotApplicable;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return kNotApplicable;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace lockss

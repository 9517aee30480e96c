// SPDX-License-Identifier: Apache-2.0
#include "volcap/sync/sync.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace volcap::sync {

void Timeline::validate() const {
  if (times.empty()) throw std::invalid_argument("Timeline: no sensors");
  for (const auto& t : times)
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1]) throw std::invalid_argument("Timeline: timestamps not increasing");
}

double inconsistency_ms(const Timeline& timeline, const std::vector<int>& indices) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double t = timeline.times[k].at(indices[k]);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return hi - lo;
}

Timeline align_timelines(const Timeline& timeline, const std::vector<double>& offsets_ms) {
  if (offsets_ms.size() != timeline.times.size())
    throw std::invalid_argument("align_timelines: one offset per sensor required");
  Timeline out = timeline;
  for (std::size_t k = 0; k < out.times.size(); ++k)
    for (auto& t : out.times[k]) t -= offsets_ms[k];
  return out;
}

GoF initial_gof(const Timeline& timeline, int window) {
  timeline.validate();
  const int k_count = timeline.sensor_count();
  for (const auto& t : timeline.times)
    if (t.empty()) throw std::invalid_argument("initial_gof: empty sensor timeline");

  std::vector<int> limit(k_count);
  for (int k = 0; k < k_count; ++k)
    limit[k] = std::min<int>(window, static_cast<int>(timeline.times[k].size()));

  std::vector<int> idx(k_count, 0), best;
  double best_inc = std::numeric_limits<double>::infinity();
  while (true) {
    const double inc = inconsistency_ms(timeline, idx);
    if (inc < best_inc) {
      best_inc = inc;
      best = idx;
    }
    int k = k_count - 1;
    while (k >= 0 && ++idx[k] == limit[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return GoF{best, best_inc};
}

std::optional<GoF> next_gof(const Timeline& timeline, const GoF& current) {
  const int k_count = timeline.sensor_count();
  if (static_cast<int>(current.indices.size()) != k_count)
    throw std::invalid_argument("next_gof: index count mismatch");

  std::vector<int> can_advance;
  for (int k = 0; k < k_count; ++k)
    if (current.indices[k] + 1 < static_cast<int>(timeline.times[k].size()))
      can_advance.push_back(k);
  if (can_advance.empty()) return std::nullopt;

  std::vector<int> best_s;  // per-sensor 0/1 advance pattern
  double best_inc = std::numeric_limits<double>::infinity();
  std::vector<int> candidate(k_count), s(k_count);

  const int subsets = 1 << can_advance.size();
  for (int mask = 1; mask < subsets; ++mask) {
    std::fill(s.begin(), s.end(), 0);
    for (std::size_t b = 0; b < can_advance.size(); ++b)
      if (mask & (1 << b)) s[can_advance[b]] = 1;
    for (int k = 0; k < k_count; ++k) candidate[k] = current.indices[k] + s[k];
    const double inc = inconsistency_ms(timeline, candidate);

    bool better = inc < best_inc;
    if (!better && inc == best_inc && !best_s.empty()) {
      const int pop = std::accumulate(s.begin(), s.end(), 0);
      const int best_pop = std::accumulate(best_s.begin(), best_s.end(), 0);
      better = pop > best_pop ||
               (pop == best_pop && std::lexicographical_compare(s.begin(), s.end(),
                                                                best_s.begin(), best_s.end()));
    }
    if (better) {
      best_inc = inc;
      best_s = s;
    }
  }

  GoF next;
  next.indices = current.indices;
  for (int k = 0; k < k_count; ++k) next.indices[k] += best_s[k];
  next.inconsistency_ms = best_inc;
  return next;
}

std::vector<GoF> gof_sequence(const Timeline& timeline, int init_window) {
  std::vector<GoF> out;
  out.push_back(initial_gof(timeline, init_window));
  while (auto next = next_gof(timeline, out.back())) out.push_back(std::move(*next));
  return out;
}

void write_gof_csv(const std::filesystem::path& path, const std::vector<GoF>& gofs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write gof csv: " + path.string());
  const int k_count = gofs.empty() ? 0 : static_cast<int>(gofs.front().indices.size());
  out << "m";
  for (int k = 1; k <= k_count; ++k) out << ",n_" << k;
  out << ",inconsistency_ms\n";
  out.precision(6);
  out << std::fixed;
  for (std::size_t m = 0; m < gofs.size(); ++m) {
    out << m;
    for (int idx : gofs[m].indices) out << ',' << idx;
    out << ',' << gofs[m].inconsistency_ms << '\n';
  }
}

std::vector<GoF> read_gof_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read gof csv: " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<GoF> gofs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw std::runtime_error("bad gof row: " + line);
    GoF g;
    for (std::size_t i = 1; i + 1 < cells.size(); ++i) g.indices.push_back(std::stoi(cells[i]));
    g.inconsistency_ms = std::stod(cells.back());
    gofs.push_back(std::move(g));
  }
  return gofs;
}

}  // namespace volcap::sync

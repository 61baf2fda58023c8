#pragma once

// Straight-line reference for the metric pipeline, used only by tests. It
// shares no code with the library: it groups records with a std::map, uses the
// textbook pow() form of the Minkowski distance for every finite p, and
// recomputes every intermediate from scratch.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace roby::testing {

struct NaiveRecord {
  unsigned label;
  std::vector<double> x;
};

struct NaiveReport {
  std::vector<double> fsa_per_class;
  std::vector<double> fsd_per_pair;
  std::vector<double> roby_per_pair;
  double fsa;
  double fsd;
  double roby;
};

inline double naive_distance(const std::vector<double>& a, const std::vector<double>& b, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::fabs(a[i] - b[i]) > m) m = std::fabs(a[i] - b[i]);
    return m;
  }
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::fabs(a[i] - b[i]), p);
  return std::pow(s, 1.0 / p);
}

inline std::vector<double> naive_minmax(const std::vector<double>& v) {
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> out;
  for (double x : v) out.push_back(hi > lo ? (x - lo) / (hi - lo) : 0.0);
  return out;
}

inline double naive_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

inline NaiveReport naive_evaluate(const std::vector<NaiveRecord>& records, unsigned num_classes, double p) {
  std::map<unsigned, std::vector<std::vector<double>>> groups;
  for (const auto& r : records) groups[r.label].push_back(r.x);

  std::vector<std::vector<double>> centers(num_classes);
  for (unsigned k = 0; k < num_classes; ++k) {
    const auto& g = groups.at(k);
    std::vector<double> c(g[0].size(), 0.0);
    for (std::size_t d = 0; d < c.size(); ++d) {
      for (const auto& x : g) c[d] += x[d];
      c[d] /= g.size();
    }
    centers[k] = c;
  }

  NaiveReport rep;
  for (unsigned k = 0; k < num_classes; ++k) {
    double s = 0;
    for (const auto& x : groups.at(k)) s += naive_distance(x, centers[k], p);
    rep.fsa_per_class.push_back(s / groups.at(k).size());
  }
  for (unsigned i = 0; i < num_classes; ++i) {
    for (unsigned j = i + 1; j < num_classes; ++j) {
      const double d = naive_distance(centers[i], centers[j], p);
      rep.fsd_per_pair.push_back(d);
      rep.roby_per_pair.push_back(rep.fsa_per_class[i] + rep.fsa_per_class[j] - d);
    }
  }
  rep.fsa = 1.0 - naive_mean(naive_minmax(rep.fsa_per_class));
  rep.fsd = naive_mean(naive_minmax(rep.fsd_per_pair));
  rep.roby = naive_mean(naive_minmax(rep.roby_per_pair));
  return rep;
}

}  // namespace roby::testing

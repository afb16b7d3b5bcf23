#ifndef GRANTMINE_TESTS_SPLIT_ORACLE_H_
#define GRANTMINE_TESTS_SPLIT_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "grantmine/tree_models.h"

namespace grantmine::testing {

// Dense small dataset: values[i][f] and labels[i].
struct SmallData {
  std::vector<std::vector<double>> values;
  std::vector<Label> labels;
};

inline Dataset ToDataset(const SmallData& d, std::size_t n_features) {
  Dataset out;
  out.n_features = n_features;
  out.labels = d.labels;
  for (const auto& row : d.values) {
    std::vector<SparseEntry> entries;
    for (std::size_t f = 0; f < n_features; ++f) {
      entries.push_back({static_cast<FeatureIndex>(f), row[f]});
    }
    out.rows.push_back(SparseVector::FromEntries(n_features, std::move(entries)));
  }
  return out;
}

inline double GiniOf(double low, double high) {
  const double n = low + high;
  return 1.0 - (low / n) * (low / n) - (high / n) * (high / n);
}

// Best Gini gain over every feature and every threshold strictly between two
// observed values, computed from scratch. 0 when no split improves.
inline double BruteForceBestGain(const SmallData& d, std::size_t n_features, int min_leaf = 1) {
  const std::size_t n = d.labels.size();
  double lo_all = 0, hi_all = 0;
  for (Label y : d.labels) (y == Label::kHigh ? hi_all : lo_all) += 1;
  const double parent = GiniOf(lo_all, hi_all);
  double best = 0.0;
  for (std::size_t f = 0; f < n_features; ++f) {
    std::set<double> distinct;
    for (const auto& row : d.values) distinct.insert(row[f]);
    std::vector<double> v(distinct.begin(), distinct.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double t = (v[k] + v[k + 1]) / 2;
      double ll = 0, lh = 0, rl = 0, rh = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool left = d.values[i][f] <= t;
        const bool high = d.labels[i] == Label::kHigh;
        (left ? (high ? lh : ll) : (high ? rh : rl)) += 1;
      }
      if (ll + lh < min_leaf || rl + rh < min_leaf) continue;
      const double child = ((ll + lh) * GiniOf(ll, lh) + (rl + rh) * GiniOf(rl, rh)) / n;
      best = std::max(best, parent - child);
    }
  }
  return best;
}

// Visits every multiset of `n` rows drawn from the 2^(f+1) (features, label)
// combinations. Row order cannot change the best gain, so multisets cover all
// labelled datasets of that size.
inline void ForEachBinaryDataset(std::size_t n, std::size_t n_features,
                                 const std::function<void(const SmallData&)>& visit) {
  const int kinds = 1 << (n_features + 1);
  std::vector<int> pick(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int from) {
    if (pos == n) {
      SmallData d;
      for (int code : pick) {
        std::vector<double> row(n_features);
        for (std::size_t f = 0; f < n_features; ++f) row[f] = (code >> (f + 1)) & 1;
        d.values.push_back(std::move(row));
        d.labels.push_back((code & 1) ? Label::kHigh : Label::kLow);
      }
      visit(d);
      return;
    }
    for (int c = from; c < kinds; ++c) {
      pick[pos] = c;
      rec(pos + 1, c);
    }
  };
  rec(0, 0);
}

}  // namespace grantmine::testing

#endif  // GRANTMINE_TESTS_SPLIT_ORACLE_H_

#include "grantmine/sparse_vector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "grantmine/error.h"

namespace grantmine {

SparseVector SparseVector::FromEntries(std::size_t dim, std::vector<SparseEntry> entries) {
  std::erase_if(entries, [](const SparseEntry& e) { return e.value == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= dim) {
      throw Error("sparse index " + std::to_string(entries[i].index) +
                  " out of range for dimension " + std::to_string(dim));
    }
    if (i > 0 && entries[i].index == entries[i - 1].index) {
      throw Error("repeated sparse index " + std::to_string(entries[i].index));
    }
  }
  SparseVector v(dim);
  v.entries_ = std::move(entries);
  return v;
}

double SparseVector::Get(FeatureIndex index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const SparseEntry& e, FeatureIndex i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::Norm() const {
  double ss = 0.0;
  for (const SparseEntry& e : entries_) ss += e.value * e.value;
  return std::sqrt(ss);
}

}  // namespace grantmine

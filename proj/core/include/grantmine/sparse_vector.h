#ifndef GRANTMINE_SPARSE_VECTOR_H_
#define GRANTMINE_SPARSE_VECTOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grantmine {

using FeatureIndex = std::uint32_t;

struct SparseEntry {
  FeatureIndex index;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Feature vector storing only nonzero weights, sorted by index. Absent
// entries read as 0.0.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}

  // Sorts, drops zeros, and rejects out-of-range or repeated indices.
  static SparseVector FromEntries(std::size_t dim, std::vector<SparseEntry> entries);

  double Get(FeatureIndex index) const;
  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double Norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<SparseEntry> entries_;
  std::size_t dim_ = 0;
};

}  // namespace grantmine

#endif  // GRANTMINE_SPARSE_VECTOR_H_

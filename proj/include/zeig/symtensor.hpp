#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zeig/denselin.hpp"

namespace zeig {

/// One unique entry of a symmetric tensor: a nondecreasing index tuple
/// (0-based) and the value shared by every permutation of that tuple.
struct Entry {
  std::vector<std::size_t> index;
  double value = 0.0;
};

/// Sparse description of a symmetric tensor listing only sorted tuples.
struct EntryList {
  int order = 0;
  std::size_t dim = 0;
  std::vector<Entry> entries;
};

/// Result of contracting a tensor with a vector in all trailing modes.
///   matrix = A x^{m-2}, vector = A x^{m-1}, scalar = A x^m
struct Contraction {
  SymMatrix matrix;
  std::vector<double> vector;
  double scalar = 0.0;
};

/// Dense order-m, dimension-n real symmetric tensor.
///
/// Storage is the full n^m array in row-major multi-index order, so the
/// memory footprint is n^m * 8 bytes. Construction refuses tensors larger
/// than `max_bytes`. Instances are immutable after construction.
class SymmetricTensor {
 public:
  static constexpr std::uint64_t kDefaultMaxBytes = std::uint64_t{1} << 31;

  /// Zero tensor.
  SymmetricTensor(int order, std::size_t dim,
                  std::uint64_t max_bytes = kDefaultMaxBytes);

  /// Symmetrizes an entry list: every permutation of a listed tuple carries
  /// its value, unlisted positions are zero. Rejects duplicate, unsorted or
  /// out-of-range tuples and non-finite values.
  static SymmetricTensor from_entries(const EntryList& list,
                                      std::uint64_t max_bytes = kDefaultMaxBytes);

  int order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Element at a (not necessarily sorted) 0-based multi-index.
  double operator()(std::span<const std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const;

  /// Nonzero entries with sorted index tuples, in lexicographic order.
  EntryList to_entries() const;

  /// A x^{m-2}, A x^{m-1} and A x^m in a single pass. The trailing modes are
  /// contracted one at a time down to the n x n matrix; the vector and scalar
  /// are then formed from that matrix.
  Contraction contract_all(std::span<const double> x) const;

  /// Largest deviation |a_i - a_p(i)| over all positions and adjacent
  /// transpositions; zero for tensors built through this class.
  double symmetry_defect() const;

 private:
  std::size_t flat_index(std::span<const std::size_t> index) const;

  int order_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// Bytes needed for dense storage, or UINT64_MAX on overflow.
std::uint64_t dense_bytes(int order, std::size_t dim);

// Text format:
//   line 1: "m n"
//   then one "i_1 ... i_m value" line per unique entry, 1-based sorted indices
//   '#' starts a comment
EntryList parse_entries(std::istream& in);
EntryList read_entries(const std::string& path);
SymmetricTensor read_tensor(const std::string& path);
void write_tensor(std::ostream& out, const SymmetricTensor& tensor);
void write_tensor(const std::string& path, const SymmetricTensor& tensor);

}  // namespace zeig

#include "zeig/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zeig {

std::uint64_t dense_bytes(int order, std::size_t dim) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (int i = 0; i < order; ++i) {
    if (dim != 0 && count > kMax / dim) return kMax;
    count *= dim;
  }
  if (count > kMax / sizeof(double)) return kMax;
  return count * sizeof(double);
}

SymmetricTensor::SymmetricTensor(int order, std::size_t dim, std::uint64_t max_bytes)
    : order_(order), dim_(dim) {
  if (order < 2) throw std::invalid_argument("tensor order must be at least 2");
  if (dim < 1) throw std::invalid_argument("tensor dimension must be at least 1");
  const std::uint64_t bytes = dense_bytes(order, dim);
  if (bytes > max_bytes)
    throw std::length_error("dense tensor of order " + std::to_string(order) + " and dimension " +
                            std::to_string(dim) + " exceeds the storage cap of " +
                            std::to_string(max_bytes) + " bytes");
  values_.assign(bytes / sizeof(double), 0.0);
}

std::size_t SymmetricTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != static_cast<std::size_t>(order_))
    throw std::invalid_argument("index arity does not match tensor order");
  std::size_t flat = 0;
  for (std::size_t i : index) {
    if (i >= dim_) throw std::out_of_range("tensor index out of range");
    flat = flat * dim_ + i;
  }
  return flat;
}

double SymmetricTensor::operator()(std::span<const std::size_t> index) const {
  return values_[flat_index(index)];
}

double SymmetricTensor::at(std::initializer_list<std::size_t> index) const {
  return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
}

SymmetricTensor SymmetricTensor::from_entries(const EntryList& list, std::uint64_t max_bytes) {
  SymmetricTensor t(list.order, list.dim, max_bytes);
  std::set<std::vector<std::size_t>> seen;
  for (const Entry& e : list.entries) {
    if (e.index.size() != static_cast<std::size_t>(list.order))
      throw std::invalid_argument("entry arity does not match tensor order");
    if (!std::is_sorted(e.index.begin(), e.index.end()))
      throw std::invalid_argument("entry index tuple is not sorted nondecreasing");
    for (std::size_t i : e.index)
      if (i >= list.dim) throw std::out_of_range("entry index out of range");
    if (!std::isfinite(e.value)) throw std::invalid_argument("entry value is not finite");
    if (!seen.insert(e.index).second) throw std::invalid_argument("duplicate entry index tuple");

    std::vector<std::size_t> perm = e.index;
    do {
      t.values_[t.flat_index(perm)] = e.value;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return t;
}

EntryList SymmetricTensor::to_entries() const {
  EntryList out{order_, dim_, {}};
  std::vector<std::size_t> idx(order_, 0);
  // Walk nondecreasing tuples in lexicographic order.
  while (true) {
    const double v = values_[flat_index(idx)];
    if (v != 0.0) out.entries.push_back({idx, v});
    int pos = order_ - 1;
    while (pos >= 0 && idx[pos] == dim_ - 1) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < order_; ++j) idx[j] = idx[pos];
  }
  return out;
}

Contraction SymmetricTensor::contract_all(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("contract_all: vector length does not match tensor dimension");
  const std::size_t n = dim_;

  std::vector<double> cur(values_.begin(), values_.end());
  std::vector<double> next;
  for (int r = order_; r > 2; --r) {
    const std::size_t rows = cur.size() / n;
    next.assign(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = cur.data() + i * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
      next[i] = s;
    }
    cur.swap(next);
  }

  Matrix m(n, n);
  std::copy(cur.begin(), cur.end(), m.data().begin());
  Contraction c;
  c.matrix = SymMatrix(std::move(m));
  c.vector = c.matrix.apply(x);
  c.scalar = dot(c.vector, x);
  return c;
}

double SymmetricTensor::symmetry_defect() const {
  double defect = 0.0;
  std::vector<std::size_t> idx(order_);
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    std::size_t rem = flat;
    for (int p = order_ - 1; p >= 0; --p) {
      idx[p] = rem % dim_;
      rem /= dim_;
    }
    for (int p = 0; p + 1 < order_; ++p) {
      std::swap(idx[p], idx[p + 1]);
      defect = std::max(defect, std::abs(values_[flat] - values_[flat_index(idx)]));
      std::swap(idx[p], idx[p + 1]);
    }
  }
  return defect;
}

namespace {

// Strips a '#' comment and reports whether anything but whitespace remains.
bool content_of(std::string& line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

}  // namespace

EntryList parse_entries(std::istream& in) {
  EntryList list;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content_of(line)) continue;
    std::istringstream ls(line);
    if (!have_header) {
      long long m = 0, n = 0;
      if (!(ls >> m >> n) || m < 2 || n < 1)
        throw std::runtime_error("tensor file line " + std::to_string(lineno) + ": expected header 'm n'");
      list.order = static_cast<int>(m);
      list.dim = static_cast<std::size_t>(n);
      have_header = true;
      continue;
    }
    Entry e;
    e.index.resize(list.order);
    for (int k = 0; k < list.order; ++k) {
      long long i = 0;
      if (!(ls >> i)) throw std::runtime_error("tensor file line " + std::to_string(lineno) + ": malformed index");
      if (i < 1 || static_cast<std::size_t>(i) > list.dim)
        throw std::runtime_error("tensor file line " + std::to_string(lineno) + ": index " + std::to_string(i) +
                                 " outside [1, " + std::to_string(list.dim) + "]");
      e.index[k] = static_cast<std::size_t>(i - 1);
    }
    if (!(ls >> e.value)) throw std::runtime_error("tensor file line " + std::to_string(lineno) + ": missing value");
    std::string extra;
    if (ls >> extra) throw std::runtime_error("tensor file line " + std::to_string(lineno) + ": trailing tokens");
    list.entries.push_back(std::move(e));
  }
  if (!have_header) throw std::runtime_error("tensor file: missing header");
  return list;
}

EntryList read_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file '" + path + "'");
  return parse_entries(in);
}

SymmetricTensor read_tensor(const std::string& path) {
  return SymmetricTensor::from_entries(read_entries(path));
}

void write_tensor(std::ostream& out, const SymmetricTensor& tensor) {
  out << tensor.order() << ' ' << tensor.dim() << '\n';
  char buf[64];
  for (const Entry& e : tensor.to_entries().entries) {
    for (std::size_t i : e.index) out << i + 1 << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    out << buf << '\n';
  }
}

void write_tensor(const std::string& path, const SymmetricTensor& tensor) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_tensor(out, tensor);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace zeig

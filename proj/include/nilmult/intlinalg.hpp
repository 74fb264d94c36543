#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms, lattice quotients,
// and finitely generated abelian groups with direct sum, tensor product and Tor.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/integer.hpp"

namespace nilmult {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::size_t cols, std::vector<std::vector<Integer>> rows) : cols_(cols) {
    for (auto& r : rows) append_row(std::move(r));
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(const std::vector<Integer>& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Integer> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  void append_row(std::vector<Integer> r) {
    if (r.size() != cols_) throw precondition_error("row length does not match matrix width");
    for (auto& x : r) data_.push_back(std::move(x));
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row_dst += q * row_src
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(src, j) != 0) (*this)(dst, j) += q * (*this)(src, j);
  }
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, src) != 0) (*this)(i, dst) += q * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  /// The first n rows.
  IntMatrix top_rows(std::size_t n) const {
    IntMatrix m(n, cols_);
    std::copy_n(data_.begin(), static_cast<std::ptrdiff_t>(n * cols_), m.data_.begin());
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw precondition_error("matrix product shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const Integer& x = a(i, l);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(l, j) != 0) c(i, j) += x * b(l, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Row-style Hermite normal form together with the row operations that produced it.
struct HermiteDecomposition {
  IntMatrix form;       // rank x cols, echelon, positive pivots, entries above pivots in [0, pivot)
  IntMatrix transform;  // rank x rows(M): form = transform * M
  std::vector<std::size_t> pivots;
};

inline HermiteDecomposition hermite_decomposition(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < a.rows(); ++i)
        if (a(i, col) != 0 && (!best || abs(a(i, col)) < abs(a(*best, col)))) best = i;
      if (!best) break;
      a.swap_rows(r, *best);
      u.swap_rows(r, *best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < a.rows(); ++i) {
        if (a(i, col) == 0) continue;
        const Integer q = a(i, col) / a(r, col);
        a.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (a(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (r >= a.rows() || a(r, col) == 0) continue;
    if (a(r, col) < 0) {
      a.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(a(i, col), a(r, col));
      a.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    pivots.push_back(col);
    ++r;
  }
  return {a.top_rows(r), u.top_rows(r), std::move(pivots)};
}

inline IntMatrix hnf(const IntMatrix& m) { return hermite_decomposition(m).form; }

inline std::vector<std::size_t> hnf_pivots(const IntMatrix& h) {
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      if (h(i, j) != 0) {
        p.push_back(j);
        break;
      }
  return p;
}

/// Coefficients c with c * h = v for a matrix h in Hermite form, or nullopt if v is
/// outside the row lattice of h.
inline std::optional<std::vector<Integer>> express_in_hnf(const IntMatrix& h, std::vector<Integer> v) {
  if (v.size() != h.cols()) throw precondition_error("vector length does not match lattice dimension");
  const auto pivots = hnf_pivots(h);
  std::vector<Integer> c(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    const std::size_t p = pivots[i];
    for (std::size_t j = 0; j < p; ++j)
      if (v[j] != 0) return std::nullopt;
    if (v[p] == 0) continue;
    if (v[p] % h(i, p) != 0) return std::nullopt;
    c[i] = v[p] / h(i, p);
    for (std::size_t j = p; j < h.cols(); ++j)
      if (h(i, j) != 0) v[j] -= c[i] * h(i, j);
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return c;
}

inline std::size_t rank(const IntMatrix& m) { return hnf(m).rows(); }

/// Nonzero Smith invariants d_1 | d_2 | ... (units included), in ascending order.
inline std::vector<Integer> snf(const IntMatrix& m) {
  IntMatrix a = m;
  std::vector<Integer> diag;
  std::size_t t = 0;
  while (t < a.rows() && t < a.cols()) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < a.rows(); ++i)
      for (std::size_t j = t; j < a.cols(); ++j)
        if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second)))) best = {i, j};
    if (!best) break;
    a.swap_rows(t, best->first);
    a.swap_cols(t, best->second);
    bool done = true;
    for (std::size_t i = t + 1; i < a.rows(); ++i) {
      if (a(i, t) == 0) continue;
      a.add_row_multiple(i, t, -(a(i, t) / a(t, t)));
      if (a(i, t) != 0) done = false;
    }
    for (std::size_t j = t + 1; j < a.cols(); ++j) {
      if (a(t, j) == 0) continue;
      a.add_col_multiple(j, t, -(a(t, j) / a(t, t)));
      if (a(t, j) != 0) done = false;
    }
    if (!done) continue;
    // Pivot must divide the whole trailing block.
    std::optional<std::size_t> offending;
    for (std::size_t i = t + 1; i < a.rows() && !offending; ++i)
      for (std::size_t j = t + 1; j < a.cols(); ++j)
        if (a(i, j) % a(t, t) != 0) {
          offending = i;
          break;
        }
    if (offending) {
      a.add_row_multiple(t, *offending, Integer(1));
      continue;
    }
    diag.push_back(abs(a(t, t)));
    ++t;
  }
  return diag;
}

/// A finitely generated abelian group Z^r + Z_{d_1} + ... + Z_{d_s} in canonical form:
/// every d_i >= 2 and d_i | d_{i+1}.
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;

  /// Validating constructor; rejects non-canonical factor lists.
  FgAbelianGroup(std::uint64_t free_rank, std::vector<Integer> invariant_factors)
      : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2) throw precondition_error("invariant factors must be at least 2");
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw precondition_error("invariant factors must form a divisibility chain");
    }
  }

  /// Canonicalizes an arbitrary list of cyclic orders; order 0 means infinite cyclic.
  static FgAbelianGroup from_cyclic_orders(const std::vector<Integer>& orders) {
    std::uint64_t free = 0;
    std::vector<Integer> finite;
    for (const auto& o : orders) {
      if (o == 0)
        ++free;
      else if (abs(o) != 1)
        finite.push_back(abs(o));
    }
    std::vector<Integer> factors;
    for (auto& d : snf(IntMatrix::diagonal(finite)))
      if (d != 1) factors.push_back(std::move(d));
    return FgAbelianGroup(free, std::move(factors));
  }

  static FgAbelianGroup cyclic(const Integer& order) { return from_cyclic_orders({order}); }
  static FgAbelianGroup trivial() { return {}; }

  std::uint64_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }

  /// Order of the torsion part.
  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& d : factors_) o *= d;
    return o;
  }

  friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;

 private:
  std::uint64_t free_rank_ = 0;
  std::vector<Integer> factors_;
};

/// "1" for the trivial group, otherwise e.g. "Z^2 + Z_2 + Z_6".
inline std::string render(const FgAbelianGroup& g) {
  if (g.is_trivial()) return "1";
  std::string s;
  auto append = [&](const std::string& part) {
    if (!s.empty()) s += " + ";
    s += part;
  };
  if (g.free_rank() == 1) append("Z");
  if (g.free_rank() > 1) append("Z^" + std::to_string(g.free_rank()));
  for (const auto& d : g.invariant_factors()) append("Z_" + to_string(d));
  return s;
}

/// Row lattice of a over the row lattice of b. Throws if L(b) is not inside L(a).
inline FgAbelianGroup lattice_quotient(const IntMatrix& a, const IntMatrix& b) {
  if (!b.empty() && a.cols() != b.cols()) throw precondition_error("lattices of different dimension");
  const IntMatrix ha = hnf(a);
  IntMatrix coeffs(0, ha.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto c = express_in_hnf(ha, b.row(i));
    if (!c) throw consistency_error("lattice containment violated: row " + std::to_string(i) +
                                    " of the sublattice is outside the ambient lattice");
    coeffs.append_row(std::move(*c));
  }
  const auto d = snf(coeffs);
  std::vector<Integer> factors;
  for (const auto& x : d)
    if (x != 1) factors.push_back(x);
  return FgAbelianGroup(ha.rows() - d.size(), std::move(factors));
}

inline FgAbelianGroup direct_sum(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<Integer> orders(a.free_rank() + b.free_rank(), Integer(0));
  for (const auto& d : a.invariant_factors()) orders.push_back(d);
  for (const auto& d : b.invariant_factors()) orders.push_back(d);
  return FgAbelianGroup::from_cyclic_orders(orders);
}

/// Z (x) Z = Z, Z (x) Z_n = Z_n, Z_m (x) Z_n = Z_gcd(m,n), extended bilinearly.
inline FgAbelianGroup tensor(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<Integer> orders(a.free_rank() * b.free_rank(), Integer(0));
  for (std::uint64_t i = 0; i < a.free_rank(); ++i)
    for (const auto& n : b.invariant_factors()) orders.push_back(n);
  for (std::uint64_t j = 0; j < b.free_rank(); ++j)
    for (const auto& m : a.invariant_factors()) orders.push_back(m);
  for (const auto& m : a.invariant_factors())
    for (const auto& n : b.invariant_factors()) orders.push_back(gcd(m, n));
  return FgAbelianGroup::from_cyclic_orders(orders);
}

/// Tor_1 over Z: only torsion pairs contribute, Tor(Z_m, Z_n) = Z_gcd(m,n).
inline FgAbelianGroup tor(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<Integer> orders;
  for (const auto& m : a.invariant_factors())
    for (const auto& n : b.invariant_factors()) orders.push_back(gcd(m, n));
  return FgAbelianGroup::from_cyclic_orders(orders);
}

}  // namespace nilmult

#pragma once

// The free nilpotent group F/gamma_{k+1}(F): Mal'cev coordinates along the Hall basis,
// and subgroups given by canonical triangular generating sequences (echelons).
//
// Coordinates are ordered by weight, so for every position i the elements whose
// coordinates vanish before i form a normal subgroup G_i with G_i/G_{i+1} central and
// infinite cyclic. Coordinate i is additive on G_i; sifting and echelon insertion rely
// on nothing else.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/hall_basis.hpp"
#include "nilmult/intlinalg.hpp"
#include "nilmult/series.hpp"

namespace nilmult {

using Coordinates = std::vector<Integer>;

namespace detail {

inline TruncatedSeries signed_power(const TruncatedSeries& a, const TruncatedSeries& a_inv, const Integer& e) {
  if (e == 0) return TruncatedSeries::one(a.context());
  if (e == 1) return a;
  if (e == -1) return a_inv;
  return e > 0 ? power(a, e) : power(a_inv, Integer(-e));
}

/// [a,b] with both inverses already known.
inline TruncatedSeries commutator(const TruncatedSeries& a, const TruncatedSeries& a_inv,
                                  const TruncatedSeries& b, const TruncatedSeries& b_inv) {
  return a_inv * b_inv * a * b;
}

}  // namespace detail

class NilContext {
 public:
  NilContext(int t, int k, std::uint64_t guard = default_monomial_guard)
      : data_(std::make_shared<Data>(t, k, guard)) {}

  int generators() const { return data_->series.generators(); }
  int depth() const { return data_->series.depth(); }
  const TruncationContext& series_context() const { return data_->series; }
  const HallBasis& hall() const { return *data_->basis; }

  /// Total number of Mal'cev coordinates m.
  std::size_t dimension() const { return data_->basis->layer_end(depth()); }
  int weight_of(std::size_t i) const { return (*data_->basis)[i].weight; }
  std::size_t block_begin(int n) const { return data_->basis->layer_begin(n); }
  std::size_t block_end(int n) const { return data_->basis->layer_end(n); }
  std::string name(std::size_t i) const { return data_->basis->render(i); }

  /// Group realization of the i-th basic commutator and its inverse.
  const TruncatedSeries& basis_element(std::size_t i) const { return data_->realization[i]; }
  const TruncatedSeries& basis_inverse(std::size_t i) const { return data_->inverse[i]; }

  TruncatedSeries generator(int i) const { return generator_series(data_->series, i); }
  TruncatedSeries one() const { return TruncatedSeries::one(data_->series); }

  /// Weight-n coordinates of an element of gamma_n, read from its degree-n slice.
  std::vector<Integer> block_coordinates(const TruncatedSeries& a, int n) const {
    return data_->lattices[static_cast<std::size_t>(n) - 1]->coordinates(homogeneous_part(a, n));
  }

  friend bool operator==(const NilContext& a, const NilContext& b) {
    return a.data_ == b.data_ || a.data_->series == b.data_->series;
  }

 private:
  struct Data {
    Data(int t, int k, std::uint64_t guard) : series(guarded(t, k, guard)), basis(hall_basis(t, k)) {
      const auto m = basis->layer_end(k);
      realization.reserve(m);
      inverse.reserve(m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto& b = (*basis)[i];
        if (b.is_generator())
          realization.push_back(generator_series(series, b.generator));
        else
          realization.push_back(detail::commutator(realization[b.left], inverse[b.left],
                                                   realization[b.right], inverse[b.right]));
        inverse.push_back(nilmult::inverse(realization.back()));
      }
      for (int n = 1; n <= k; ++n) lattices.push_back(lie_lattice(t, n));
    }
    static TruncationContext guarded(int t, int k, std::uint64_t guard) {
      TruncationContext ctx(t, k);
      check_monomial_guard(ctx, guard);
      return ctx;
    }

    TruncationContext series;
    std::shared_ptr<const HallBasis> basis;
    std::vector<TruncatedSeries> realization;
    std::vector<TruncatedSeries> inverse;
    std::vector<std::shared_ptr<const LieLattice>> lattices;
  };
  std::shared_ptr<const Data> data_;
};

inline void check_context(const TruncatedSeries& a, const NilContext& ctx) {
  if (!(a.context() == ctx.series_context())) throw precondition_error("element belongs to a different context");
  if (!a.is_group_like()) throw precondition_error("element is not group-like");
}

/// Mal'cev coordinates by deflation: weight by weight, read the block from the slice
/// and strip the basis powers from the left.
inline Coordinates to_coordinates(const TruncatedSeries& a, const NilContext& ctx) {
  check_context(a, ctx);
  Coordinates c(ctx.dimension());
  TruncatedSeries r = a;
  for (int n = 1; n <= ctx.depth(); ++n) {
    if (r.degree_is_zero(n)) continue;
    const auto block = ctx.block_coordinates(r, n);
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (block[j] == 0) continue;
      const std::size_t i = ctx.block_begin(n) + j;
      c[i] = block[j];
      r = detail::signed_power(ctx.basis_element(i), ctx.basis_inverse(i), Integer(-block[j])) * r;
    }
    if (!r.degree_is_zero(n)) throw consistency_error("deflation left a nonzero slice");
  }
  if (!r.is_identity()) throw consistency_error("deflation did not reach the identity");
  return c;
}

/// Ordered product of basis powers.
inline TruncatedSeries from_coordinates(const Coordinates& c, const NilContext& ctx) {
  if (c.size() != ctx.dimension()) throw precondition_error("coordinate vector has the wrong length");
  TruncatedSeries r = ctx.one();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) r = r * detail::signed_power(ctx.basis_element(i), ctx.basis_inverse(i), c[i]);
  return r;
}

struct EchelonRow {
  TruncatedSeries element;
  Coordinates coords;
  std::size_t lead = 0;

  const Integer& lead_value() const { return coords[lead]; }
  friend bool operator==(const EchelonRow&, const EchelonRow&) = default;
};

/// Result of sifting an element through an echelon. For a non-member, `lead` is the
/// first coordinate that could not be cleared and `block` the residual's coordinates
/// in that weight.
struct SiftResult {
  bool member = false;
  TruncatedSeries residual;
  std::size_t lead = 0;
  int weight = 0;
  std::vector<Integer> block;
};

namespace detail {

/// What sifting needs from a row: element, inverse, lead entry, coordinates in its lead weight.
struct SiftRow {
  TruncatedSeries element;
  TruncatedSeries inverse;
  Integer lead_value;
  std::vector<Integer> block;
};

inline SiftResult sift(TruncatedSeries r, const NilContext& ctx, const std::map<std::size_t, SiftRow>& rows) {
  while (true) {
    const auto n = min_positive_degree(r);
    if (!n) return {true, std::move(r), 0, 0, {}};
    auto c = ctx.block_coordinates(r, *n);
    const std::size_t begin = ctx.block_begin(*n);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0) continue;
      auto it = rows.find(begin + j);
      if (it == rows.end() || c[j] % it->second.lead_value != 0)
        return {false, std::move(r), begin + j, *n, std::move(c)};
      const Integer q = c[j] / it->second.lead_value;
      r = r * signed_power(it->second.element, it->second.inverse, Integer(-q));
      for (std::size_t l = j; l < c.size(); ++l)
        if (it->second.block[l] != 0) c[l] -= q * it->second.block[l];
    }
    if (!r.degree_is_zero(*n)) throw consistency_error("sifting left a nonzero slice");
  }
}

}  // namespace detail

/// A subgroup of the free nilpotent group as a canonical triangular generating sequence:
/// strictly increasing lead positions, positive lead entries, and every coordinate at
/// another row's lead position reduced into [0, lead entry).
class Echelon {
 public:
  explicit Echelon(NilContext ctx) : ctx_(std::move(ctx)) {}

  const NilContext& context() const { return ctx_; }
  const std::vector<EchelonRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  SiftResult sift(const TruncatedSeries& a) const {
    check_context(a, ctx_);
    return detail::sift(a, ctx_, sift_rows_);
  }
  bool contains(const TruncatedSeries& a) const { return sift(a).member; }

  const TruncatedSeries& row_inverse(std::size_t i) const { return sift_rows_.at(rows_[i].lead).inverse; }

  /// Hirsch-length style summary: the lead positions.
  std::vector<std::size_t> leads() const {
    std::vector<std::size_t> l;
    for (const auto& r : rows_) l.push_back(r.lead);
    return l;
  }

  friend bool operator==(const Echelon& a, const Echelon& b) {
    return a.ctx_ == b.ctx_ && a.rows_ == b.rows_;
  }

 private:
  friend class EchelonBuilder;
  NilContext ctx_;
  std::vector<EchelonRow> rows_;
  std::map<std::size_t, detail::SiftRow> sift_rows_;
};

/// Builds the echelon of the subgroup (or normal subgroup) generated by everything added.
///
/// Work proceeds weight by weight. At weight w every pending element of gamma_w is
/// reduced against the weight-w rows, whose block coordinates are kept in Hermite form;
/// what survives either becomes a row or drops into a deeper weight. Before weight w is
/// processed, the commutators of finished rows whose weights sum to w (and, for normal
/// closures, commutators of weight-(w-1) rows with the ambient generators) join the queue,
/// so the rows generate a subgroup, normal when requested.
class EchelonBuilder {
 public:
  EchelonBuilder(NilContext ctx, bool normal)
      : ctx_(std::move(ctx)), normal_(normal), pending_(static_cast<std::size_t>(ctx_.depth()) + 1) {}

  const NilContext& context() const { return ctx_; }

  void add(const TruncatedSeries& g) {
    check_context(g, ctx_);
    place(g);
  }

  Echelon finish() {
    std::vector<TruncatedSeries> ambient, ambient_inv;
    for (int j = 1; j <= ctx_.generators(); ++j) {
      ambient.push_back(ctx_.generator(j));
      ambient_inv.push_back(inverse(ambient.back()));
    }
    for (int w = 1; w <= ctx_.depth(); ++w) {
      for (auto a = rows_.begin(); a != rows_.end(); ++a)
        for (auto b = std::next(a); b != rows_.end(); ++b)
          if (ctx_.weight_of(a->first) + ctx_.weight_of(b->first) == w)
            place(detail::commutator(b->second.element, b->second.inverse, a->second.element, a->second.inverse));
      if (normal_) {
        for (const auto& [lead, row] : rows_) {
          if (ctx_.weight_of(lead) != w - 1) continue;
          for (std::size_t j = 0; j < ambient.size(); ++j) {
            place(detail::commutator(row.element, row.inverse, ambient[j], ambient_inv[j]));
            place(detail::commutator(row.element, row.inverse, ambient_inv[j], ambient[j]));
          }
        }
      }
      process_weight(w);
    }
    return canonicalize();
  }

 private:
  void place(TruncatedSeries g) {
    if (auto n = min_positive_degree(g)) pending_[static_cast<std::size_t>(*n)].push_back(std::move(g));
  }

  void process_weight(int w) {
    auto& queue = pending_[static_cast<std::size_t>(w)];
    const std::size_t begin = ctx_.block_begin(w), end = ctx_.block_end(w);
    while (!queue.empty()) {
      TruncatedSeries g = std::move(queue.back());
      queue.pop_back();
      auto c = ctx_.block_coordinates(g, w);
      bool consumed = false;
      for (std::size_t j = 0; j < c.size() && !consumed; ++j) {
        if (c[j] == 0) continue;
        const std::size_t lead = begin + j;
        auto it = rows_.find(lead);
        if (it == rows_.end()) {
          insert_new(lead, std::move(g), std::move(c));
          consumed = true;
        } else if (c[j] % it->second.lead_value == 0) {
          apply(g, c, it->second, Integer(c[j] / it->second.lead_value), j);
        } else {
          merge(it->second, std::move(g), std::move(c), j, queue);
          reduce_block(lead, end);
          consumed = true;
        }
      }
      if (!consumed) {
        if (!g.degree_is_zero(w)) throw consistency_error("reduction left a nonzero slice");
        place(std::move(g));
      }
    }
  }

  /// g <- g * row^-q, with its block coordinates following along.
  static void apply(TruncatedSeries& g, std::vector<Integer>& c, const detail::SiftRow& row, const Integer& q,
                    std::size_t from) {
    if (q == 0) return;
    g = g * detail::signed_power(row.element, row.inverse, Integer(-q));
    for (std::size_t l = from; l < c.size(); ++l)
      if (row.block[l] != 0) c[l] -= q * row.block[l];
  }

  void insert_new(std::size_t lead, TruncatedSeries g, std::vector<Integer> c) {
    const std::size_t j = lead - ctx_.block_begin(ctx_.weight_of(lead));
    if (c[j] < 0) {
      g = inverse(g);
      for (auto& x : c) x = -x;
    }
    TruncatedSeries g_inv = inverse(g);
    Integer v = c[j];
    rows_.emplace(lead, detail::SiftRow{std::move(g), std::move(g_inv), std::move(v), std::move(c)});
    reduce_block(lead, ctx_.block_end(ctx_.weight_of(lead)));
  }

  /// Replaces the row at a shared lead by the gcd combination; the two remainders vanish
  /// at that lead and go back into the queue.
  void merge(detail::SiftRow& row, TruncatedSeries g, std::vector<Integer> c, std::size_t j,
             std::vector<TruncatedSeries>& queue) {
    const Integer e = row.lead_value;
    const Integer v = c[j];
    auto [d, u, w] = xgcd(e, v);
    TruncatedSeries g_inv = inverse(g);
    TruncatedSeries combined =
        detail::signed_power(row.element, row.inverse, u) * detail::signed_power(g, g_inv, w);
    TruncatedSeries combined_inv = inverse(combined);
    std::vector<Integer> block(c.size());
    for (std::size_t l = 0; l < block.size(); ++l) block[l] = u * row.block[l] + w * c[l];
    queue.push_back(row.element * detail::signed_power(combined, combined_inv, Integer(-(e / d))));
    queue.push_back(g * detail::signed_power(combined, combined_inv, Integer(-(v / d))));
    row = detail::SiftRow{std::move(combined), std::move(combined_inv), d, std::move(block)};
  }

  /// Restores Hermite form in the block containing `changed`: the changed row is reduced
  /// against the rows after it, then every earlier row is re-reduced.
  void reduce_block(std::size_t changed, std::size_t end) {
    const std::size_t begin = ctx_.block_begin(ctx_.weight_of(changed));
    auto reduce_row = [&](std::size_t lead) {
      auto& row = rows_.at(lead);
      bool touched = false;
      for (auto it = rows_.upper_bound(lead); it != rows_.end() && it->first < end; ++it) {
        const std::size_t l = it->first - begin;
        const Integer q = floor_div(row.block[l], it->second.lead_value);
        if (q == 0) continue;
        apply(row.element, row.block, it->second, q, l);
        touched = true;
      }
      if (touched) row.inverse = inverse(row.element);
    };
    reduce_row(changed);
    for (auto it = rows_.lower_bound(begin); it != rows_.end() && it->first < changed; ++it) reduce_row(it->first);
  }

  /// Reduces every row against the rows below it across all weights and records full
  /// coordinates.
  Echelon canonicalize() {
    Echelon out(ctx_);
    std::map<std::size_t, EchelonRow> canonical;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      const std::size_t lead = it->first;
      TruncatedSeries element = it->second.element;
      TruncatedSeries rest = element;
      Coordinates coords(ctx_.dimension());
      for (int n = ctx_.weight_of(lead); n <= ctx_.depth(); ++n) {
        if (rest.is_identity()) break;
        auto c = ctx_.block_coordinates(rest, n);
        const std::size_t begin = ctx_.block_begin(n);
        for (std::size_t j = 0; j < c.size(); ++j) {
          const std::size_t idx = begin + j;
          if (idx > lead) {
            if (auto below = out.sift_rows_.find(idx); below != out.sift_rows_.end()) {
              const Integer q = floor_div(c[j], below->second.lead_value);
              if (q != 0) {
                const auto factor = detail::signed_power(below->second.element, below->second.inverse, Integer(-q));
                rest = rest * factor;
                element = element * factor;
                for (std::size_t l = j; l < c.size(); ++l)
                  if (below->second.block[l] != 0) c[l] -= q * below->second.block[l];
              }
            }
          }
          if (c[j] == 0) continue;
          coords[idx] = c[j];
          rest = detail::signed_power(ctx_.basis_element(idx), ctx_.basis_inverse(idx), Integer(-c[j])) * rest;
        }
      }
      if (!rest.is_identity()) throw consistency_error("row coordinates did not deflate to the identity");
      const int w = ctx_.weight_of(lead);
      std::vector<Integer> block(coords.begin() + static_cast<std::ptrdiff_t>(ctx_.block_begin(w)),
                                 coords.begin() + static_cast<std::ptrdiff_t>(ctx_.block_end(w)));
      auto inv = inverse(element);
      out.sift_rows_.emplace(lead, detail::SiftRow{element, inv, coords[lead], std::move(block)});
      canonical.emplace(lead, EchelonRow{std::move(element), std::move(coords), lead});
    }
    for (auto& [lead, row] : canonical) out.rows_.push_back(std::move(row));
    return out;
  }

  NilContext ctx_;
  bool normal_;
  std::vector<std::vector<TruncatedSeries>> pending_;
  std::map<std::size_t, detail::SiftRow> rows_;
};

inline Echelon echelonize(const std::vector<TruncatedSeries>& gens, const NilContext& ctx) {
  EchelonBuilder builder(ctx, false);
  for (const auto& g : gens) builder.add(g);
  return builder.finish();
}

inline SiftResult membership(const TruncatedSeries& a, const Echelon& e) { return e.sift(a); }

/// Smallest normal subgroup containing gens. Closing under commutators with the ambient
/// generators and their inverses is closing under conjugation.
inline Echelon normal_closure(const std::vector<TruncatedSeries>& gens, const NilContext& ctx) {
  EchelonBuilder builder(ctx, true);
  for (const auto& g : gens) builder.add(g);
  return builder.finish();
}

/// Image of (subgroup cap gamma_n) in gamma_n/gamma_{n+1} = Z^{witt_rank(t,n)}, in Hermite form.
inline IntMatrix layer_lattice(const Echelon& e, int n) {
  const auto& ctx = e.context();
  if (n < 1 || n > ctx.depth()) throw precondition_error("layer weight outside the truncation depth");
  const std::size_t begin = ctx.block_begin(n), end = ctx.block_end(n);
  IntMatrix m(0, end - begin);
  for (const auto& row : e.rows()) {
    if (row.lead < begin || row.lead >= end) continue;
    m.append_row(std::vector<Integer>(row.coords.begin() + static_cast<std::ptrdiff_t>(begin),
                                      row.coords.begin() + static_cast<std::ptrdiff_t>(end)));
  }
  return hnf(m);
}

}  // namespace nilmult

#pragma once

// c-nilpotent multipliers of free products of finite cyclic groups.
//
// For C = C_1 * ... * C_t with C_i = <x_i | x_i^{r_i}>, F free on x_1..x_t and S the
// normal closure of the x_i^{r_i}, the c-nilpotent multiplier is
//   M^(c)(C) = (S cap gamma_{c+1}(F)) / [S, _c F].
// The engine works in F/gamma_{k+1}(F) and compares, weight by weight, the image of
// S cap gamma_n(F) with the image of the rho-series rho_1(S) = S, rho_{n+1}(S) = [rho_n(S), F].
// A formula path evaluates the free-product formula for the 2-nilpotent multiplier.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/intlinalg.hpp"
#include "nilmult/nilgroup.hpp"

namespace nilmult {

/// Orders r_1..r_t of the cyclic free factors. Order 0 stands for an infinite cyclic
/// factor and is accepted by the formula path only.
class CyclicFactors {
 public:
  explicit CyclicFactors(std::vector<Integer> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw precondition_error("at least one cyclic factor is required");
    for (const auto& r : orders_)
      if (r < 0) throw precondition_error("cyclic orders must be nonnegative");
  }
  CyclicFactors(std::initializer_list<long long> orders)
      : CyclicFactors(std::vector<Integer>(orders.begin(), orders.end())) {}

  const std::vector<Integer>& orders() const { return orders_; }
  int size() const { return static_cast<int>(orders_.size()); }

  bool pairwise_coprime() const {
    for (std::size_t i = 0; i < orders_.size(); ++i)
      for (std::size_t j = i + 1; j < orders_.size(); ++j)
        if (gcd(orders_[i], orders_[j]) != 1) return false;
    return true;
  }

  void require_finite() const {
    for (const auto& r : orders_)
      if (r < 1)
        throw precondition_error("the truncated engine needs finite orders r_i >= 1; "
                                 "infinite cyclic factors are only supported by the formula path");
  }

 private:
  std::vector<Integer> orders_;
};

inline std::string render_orders(const CyclicFactors& f) {
  std::string s;
  for (std::size_t i = 0; i < f.orders().size(); ++i) s += (i ? "," : "") + to_string(f.orders()[i]);
  return s;
}

/// (C_1 * ... * C_t)^ab = Z_{r_1} + ... + Z_{r_t}.
inline FgAbelianGroup abelianization(const CyclicFactors& f) { return FgAbelianGroup::from_cyclic_orders(f.orders()); }

/// The generators x_i^{r_i} of S inside a context.
inline std::vector<TruncatedSeries> relators(const CyclicFactors& f, const NilContext& ctx) {
  if (ctx.generators() != f.size()) throw precondition_error("context rank differs from the number of factors");
  f.require_finite();
  std::vector<TruncatedSeries> out;
  for (int i = 0; i < f.size(); ++i) out.push_back(power(ctx.generator(i + 1), f.orders()[static_cast<std::size_t>(i)]));
  return out;
}

struct RhoLayer {
  int weight = 1;
  IntMatrix lattice;                    // Hermite form, columns indexed by the weight-n Hall basis
  std::vector<TruncatedSeries> lifts;   // one element of rho_n(S) per lattice row
};

/// rho_n(S) modulo gamma_{n+1}(F), for n = 1..k, as lattices with lifts.
class RhoLadder {
 public:
  RhoLadder(NilContext ctx, std::vector<RhoLayer> layers) : ctx_(std::move(ctx)), layers_(std::move(layers)) {}

  const NilContext& context() const { return ctx_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const RhoLayer& layer(int n) const {
    if (n < 1 || n > depth()) throw precondition_error("rho ladder level outside the computed depth");
    return layers_[static_cast<std::size_t>(n) - 1];
  }
  const IntMatrix& lattice(int n) const { return layer(n).lattice; }

 private:
  NilContext ctx_;
  std::vector<RhoLayer> layers_;
};

namespace detail {

/// Hermite form of the block coordinates of gens, with one lift per row realizing it.
inline RhoLayer lift_layer(int n, const std::vector<TruncatedSeries>& gens, const NilContext& ctx) {
  IntMatrix coords(0, ctx.block_end(n) - ctx.block_begin(n));
  std::vector<TruncatedSeries> gens_inv;
  for (const auto& g : gens) {
    if (const auto d = min_positive_degree(g); d && *d < n)
      throw consistency_error("rho generator lies outside gamma_n");
    coords.append_row(ctx.block_coordinates(g, n));
    gens_inv.push_back(inverse(g));
  }
  auto decomposition = hermite_decomposition(coords);
  RhoLayer layer{n, std::move(decomposition.form), {}};
  for (std::size_t r = 0; r < layer.lattice.rows(); ++r) {
    TruncatedSeries lift = ctx.one();
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (decomposition.transform(r, i) != 0)
        lift = lift * signed_power(gens[i], gens_inv[i], decomposition.transform(r, i));
    layer.lifts.push_back(std::move(lift));
  }
  return layer;
}

}  // namespace detail

/// L_1 = <r_i e_i>; L_{n+1} spanned by the weight-(n+1) coordinates of [lift, x_j]. Modulo
/// gamma_{n+2}, [g, f] is bilinear in g mod gamma_{n+1} and f mod gamma_2, so lattice-basis
/// lifts and the generators suffice.
inline RhoLadder rho_ladder(const CyclicFactors& f, const NilContext& ctx) {
  std::vector<RhoLayer> layers;
  layers.push_back(detail::lift_layer(1, relators(f, ctx), ctx));
  std::vector<TruncatedSeries> ambient;
  for (int j = 1; j <= ctx.generators(); ++j) ambient.push_back(ctx.generator(j));
  for (int n = 1; n < ctx.depth(); ++n) {
    std::vector<TruncatedSeries> gens;
    for (const auto& lift : layers.back().lifts)
      for (const auto& x : ambient) gens.push_back(group_commutator(lift, x));
    layers.push_back(detail::lift_layer(n + 1, gens, ctx));
  }
  return RhoLadder(ctx, std::move(layers));
}

inline RhoLadder rho_ladder(const CyclicFactors& f, int k, std::uint64_t guard = default_monomial_guard) {
  if (k < 2) throw precondition_error("rho ladder depth must be at least 2");
  return rho_ladder(f, NilContext(f.size(), k, guard));
}

/// rho_n(S) realized as a subgroup: H_1 = S, H_{j+1} the normal closure of the [h, x_i]
/// over the rows h of H_j.
inline Echelon rho_subgroup(const CyclicFactors& f, int n, const NilContext& ctx) {
  if (n < 1) throw precondition_error("rho level must be positive");
  Echelon h = normal_closure(relators(f, ctx), ctx);
  std::vector<TruncatedSeries> ambient;
  for (int j = 1; j <= ctx.generators(); ++j) ambient.push_back(ctx.generator(j));
  for (int level = 1; level < n; ++level) {
    std::vector<TruncatedSeries> gens;
    for (std::size_t r = 0; r < h.size(); ++r)
      for (const auto& x : ambient) gens.push_back(group_commutator(h.rows()[r].element, x));
    h = normal_closure(gens, ctx);
  }
  return h;
}

struct LayerComparison {
  int weight = 1;
  IntMatrix s_layer;    // image of S cap gamma_n
  IntMatrix rho_layer;  // image of rho_n(S)
  FgAbelianGroup quotient;
  bool equal() const { return s_layer == rho_layer; }
};

inline std::string truncation_note(int k) {
  return "computed in F/gamma_" + std::to_string(k + 1) +
         "(F): the result is the image of the c-nilpotent multiplier modulo S cap gamma_" +
         std::to_string(k + 1) + "(F); the exact multiplier surjects onto it";
}

struct MultiplierReport {
  std::vector<Integer> orders;
  int c = 1;
  int k = 2;
  IntMatrix numerator;
  IntMatrix denominator;
  FgAbelianGroup quotient;
  std::vector<LayerComparison> ladder;
  std::string truncation_note;
};

/// Weight-by-weight comparison of S cap gamma_n against rho_n(S) in F/gamma_{k+1}(F).
inline std::vector<LayerComparison> layer_comparisons(const CyclicFactors& f, const NilContext& ctx) {
  const Echelon s = normal_closure(relators(f, ctx), ctx);
  const RhoLadder ladder = rho_ladder(f, ctx);
  std::vector<LayerComparison> out;
  for (int n = 1; n <= ctx.depth(); ++n) {
    LayerComparison cmp{n, layer_lattice(s, n), ladder.lattice(n), {}};
    cmp.quotient = lattice_quotient(cmp.s_layer, cmp.rho_layer);
    out.push_back(std::move(cmp));
  }
  return out;
}

inline MultiplierReport report_from_comparisons(const CyclicFactors& f, int c, int k,
                                                const std::vector<LayerComparison>& ladder) {
  const auto& layer = ladder.at(static_cast<std::size_t>(c));
  return {f.orders(), c, k, layer.s_layer, layer.rho_layer, layer.quotient, ladder, truncation_note(k)};
}

inline void check_multiplier_arguments(const CyclicFactors& f, int c, int k) {
  if (c < 1) throw precondition_error("class c must be at least 1");
  if (k < c + 1) throw precondition_error("depth " + std::to_string(k) + " is below class+1 = " + std::to_string(c + 1));
  f.require_finite();
}

/// The image of M^(c)(C_1 * ... * C_t) visible in F/gamma_{k+1}(F).
inline MultiplierReport truncated_multiplier(const CyclicFactors& f, int c, int k,
                                             std::uint64_t guard = default_monomial_guard) {
  check_multiplier_arguments(f, c, k);
  const NilContext ctx(f.size(), k, guard);
  return report_from_comparisons(f, c, k, layer_comparisons(f, ctx));
}

/// Data of a group entering the free-product formula: G^ab, M(G), M^(2)(G).
struct GroupData {
  FgAbelianGroup ab;
  FgAbelianGroup m1;
  FgAbelianGroup m2;

  /// Cyclic groups (finite or infinite) have trivial Baer invariants.
  static GroupData cyclic(const Integer& order) { return {FgAbelianGroup::cyclic(order), {}, {}}; }
  static GroupData trivial() { return {}; }

  friend bool operator==(const GroupData&, const GroupData&) = default;
};

inline FgAbelianGroup schur_free_product(const std::vector<FgAbelianGroup>& ms) {
  FgAbelianGroup sum;
  for (const auto& m : ms) sum = direct_sum(sum, m);
  return sum;
}

struct BurnsEllisSummands {
  FgAbelianGroup m2_g;
  FgAbelianGroup m2_h;
  FgAbelianGroup m1_g_tensor_h_ab;
  FgAbelianGroup m1_h_tensor_g_ab;
  FgAbelianGroup tor_ab;
  FgAbelianGroup total() const {
    return schur_free_product({m2_g, m2_h, m1_g_tensor_h_ab, m1_h_tensor_g_ab, tor_ab});
  }
};

/// M^(2)(G*H) = M^(2)(G) + M^(2)(H) + M(G) (x) H^ab + M(H) (x) G^ab + Tor(G^ab, H^ab).
inline BurnsEllisSummands burns_ellis_summands(const GroupData& g, const GroupData& h) {
  return {g.m2, h.m2, tensor(g.m1, h.ab), tensor(h.m1, g.ab), tor(g.ab, h.ab)};
}

inline FgAbelianGroup burns_ellis_m2(const GroupData& g, const GroupData& h) {
  return burns_ellis_summands(g, h).total();
}

/// Folds the free-product formula over the factors left to right. The accumulated free
/// product keeps M = direct sum of the factors' M (trivial for cyclic factors) and
/// abelianization = direct sum of the factors' abelianizations.
inline FgAbelianGroup m2_free_product_cyclics(const CyclicFactors& f) {
  GroupData acc = GroupData::cyclic(f.orders().front());
  for (std::size_t i = 1; i < f.orders().size(); ++i) {
    const GroupData next = GroupData::cyclic(f.orders()[i]);
    acc = GroupData{direct_sum(acc.ab, next.ab), schur_free_product({acc.m1, next.m1}), burns_ellis_m2(acc, next)};
  }
  return acc.m2;
}

struct VerificationCheck {
  std::string check;
  int c = 0;       // class, 0 when not applicable
  int depth = 0;
  int weight = 0;  // compared weight, 0 when not applicable
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::string name;
  std::vector<Integer> orders;
  std::vector<VerificationCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

namespace detail {

inline std::string lattice_verdict(const IntMatrix& a, const IntMatrix& b) {
  if (a == b) return "lattices agree";
  return "lattices differ; index quotient " + render(lattice_quotient(a, b));
}

}  // namespace detail

/// S cap gamma_n(F) = rho_n(S) at weights 2 and 3, compared in F/gamma_{k+1}(F).
inline VerificationReport verify_intersection_layers(const CyclicFactors& f, int k,
                                                     std::uint64_t guard = default_monomial_guard) {
  if (k < 3) throw precondition_error("the weight-2 and weight-3 comparison needs depth at least 3");
  f.require_finite();
  const NilContext ctx(f.size(), k, guard);
  const auto ladder = layer_comparisons(f, ctx);
  VerificationReport report{"intersection-layers", f.orders(), {}};
  for (int n : {2, 3}) {
    const auto& cmp = ladder[static_cast<std::size_t>(n) - 1];
    report.checks.push_back({"S cap gamma_" + std::to_string(n) + " = rho_" + std::to_string(n) + "(S)", 0, k, n,
                             cmp.equal(), detail::lattice_verdict(cmp.s_layer, cmp.rho_layer)});
  }
  return report;
}

/// rho_n(S) cap gamma_{n+1}(F) = rho_{n+1}(S), with rho_n(S) realized as a subgroup.
inline VerificationReport verify_rho_intersection(const CyclicFactors& f, int n, int k,
                                                  std::uint64_t guard = default_monomial_guard) {
  if (n < 1) throw precondition_error("rho level must be positive");
  if (n + 1 > k) throw precondition_error("depth must be at least n+1");
  f.require_finite();
  const NilContext ctx(f.size(), k, guard);
  const Echelon h = rho_subgroup(f, n, ctx);
  const RhoLadder ladder = rho_ladder(f, ctx);
  const IntMatrix layer = layer_lattice(h, n + 1);
  VerificationReport report{"rho-intersection", f.orders(), {}};
  report.checks.push_back({"rho_" + std::to_string(n) + "(S) cap gamma_" + std::to_string(n + 1) + " = rho_" +
                               std::to_string(n + 1) + "(S)",
                           0, k, n + 1, layer == ladder.lattice(n + 1),
                           detail::lattice_verdict(layer, ladder.lattice(n + 1))});
  return report;
}

/// Truncated multiplier trivial for every c <= c_max at every depth c+1..k_max; only
/// meaningful for mutually coprime orders.
inline VerificationReport verify_coprime_triviality(const CyclicFactors& f, int c_max, int k_max,
                                                    std::uint64_t guard = default_monomial_guard) {
  if (!f.pairwise_coprime()) throw precondition_error("orders not mutually coprime");
  if (c_max < 1) throw precondition_error("c_max must be at least 1");
  if (c_max + 1 > k_max) throw precondition_error("k_max must be at least c_max+1");
  f.require_finite();
  VerificationReport report{"coprime-triviality", f.orders(), {}};
  for (int k = 2; k <= k_max; ++k) {
    const NilContext ctx(f.size(), k, guard);
    const auto ladder = layer_comparisons(f, ctx);
    for (int c = 1; c <= std::min(c_max, k - 1); ++c) {
      const auto& q = ladder[static_cast<std::size_t>(c)].quotient;
      report.checks.push_back({"M^(" + std::to_string(c) + ") trivial", c, k, c + 1, q.is_trivial(),
                               "truncated multiplier " + render(q)});
    }
  }
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const auto& a, const auto& b) { return a.c < b.c; });
  return report;
}

}  // namespace nilmult

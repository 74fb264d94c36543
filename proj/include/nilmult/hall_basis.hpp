#pragma once

// Hall basic commutators on ordered generators x_1 < ... < x_t. The weight-n basic
// commutators form a basis of gamma_n(F)/gamma_{n+1}(F) for F free of rank t.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/intlinalg.hpp"
#include "nilmult/series.hpp"

namespace nilmult {

struct BasicCommutator {
  std::size_t index = 0;  // position in the global basis order
  int weight = 1;
  int generator = 0;      // 1..t for a leaf, 0 for a bracket
  std::size_t left = 0;   // u in [u,v]
  std::size_t right = 0;  // v in [u,v]

  bool is_generator() const { return generator != 0; }
};

/// Witt's necklace count (1/n) sum_{d|n} mu(d) t^{n/d}.
inline Integer witt_rank(int t, int n) {
  if (t < 1 || n < 1) throw precondition_error("witt_rank needs t >= 1 and n >= 1");
  auto mobius = [](int d) {
    int result = 1;
    for (int p = 2; p * p <= d; ++p) {
      if (d % p) continue;
      d /= p;
      if (d % p == 0) return 0;
      result = -result;
    }
    return d > 1 ? -result : result;
  };
  Integer sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    Integer p = 1;
    for (int i = 0; i < n / d; ++i) p *= t;
    sum += mu * p;
  }
  return sum / n;
}

/// Basic commutators of every weight up to a bound, in canonical order: by weight, then
/// by (index(u), index(v)).
class HallBasis {
 public:
  HallBasis(int t, int max_weight) : t_(t), max_weight_(max_weight) {
    if (t < 1 || max_weight < 1) throw precondition_error("Hall basis needs t >= 1 and weight >= 1");
    layer_begin_.push_back(0);
    for (int i = 1; i <= t; ++i) elements_.push_back({elements_.size(), 1, i, 0, 0});
    layer_begin_.push_back(elements_.size());
    for (int n = 2; n <= max_weight; ++n) {
      const std::size_t previous = elements_.size();
      for (std::size_t u = 0; u < previous; ++u) {
        const int wu = elements_[u].weight;
        const int wv = n - wu;
        if (wv < 1) continue;
        for (std::size_t v = layer_begin_[static_cast<std::size_t>(wv) - 1];
             v < layer_begin_[static_cast<std::size_t>(wv)]; ++v) {
          if (!(u > v)) continue;
          if (!elements_[u].is_generator() && elements_[u].right > v) continue;
          elements_.push_back({elements_.size(), n, 0, u, v});
        }
      }
      layer_begin_.push_back(elements_.size());
    }
  }

  int generators() const { return t_; }
  int max_weight() const { return max_weight_; }
  std::size_t size() const { return elements_.size(); }
  const BasicCommutator& operator[](std::size_t i) const { return elements_[i]; }

  std::size_t layer_begin(int n) const { return layer_begin_.at(static_cast<std::size_t>(n) - 1); }
  std::size_t layer_end(int n) const { return layer_begin_.at(static_cast<std::size_t>(n)); }

  std::span<const BasicCommutator> layer(int n) const {
    if (n < 1 || n > max_weight_) throw precondition_error("weight outside the computed Hall basis");
    return {elements_.data() + layer_begin(n), layer_end(n) - layer_begin(n)};
  }

  std::string generator_name(int i) const {
    if (t_ <= 3) return std::string(1, static_cast<char>("xyz"[i - 1]));
    return "x" + std::to_string(i);
  }

  /// Left-normed flattened bracket: [[y,x],x] renders as "[y,x,x]".
  std::string render(std::size_t index) const {
    const auto& b = elements_[index];
    if (b.is_generator()) return generator_name(b.generator);
    std::vector<std::string> items;
    flatten(index, items);
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
    return s + "]";
  }

 private:
  void flatten(std::size_t index, std::vector<std::string>& items) const {
    const auto& b = elements_[index];
    if (b.is_generator()) {
      items.push_back(generator_name(b.generator));
      return;
    }
    flatten(b.left, items);
    items.push_back(render(b.right));
  }

  int t_;
  int max_weight_;
  std::vector<BasicCommutator> elements_;
  std::vector<std::size_t> layer_begin_;
};

/// Shared Hall basis of rank t covering at least the given weight. Built once per rank
/// and enlarged on demand; indices are stable under enlargement.
inline std::shared_ptr<const HallBasis> hall_basis(int t, int max_weight) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const HallBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[t];
  if (!slot || slot->max_weight() < max_weight) slot = std::make_shared<const HallBasis>(t, max_weight);
  return slot;
}

struct WeightLayer {
  int t = 1;
  int n = 1;
  std::vector<BasicCommutator> basis;
  std::vector<std::string> names;
  std::size_t rank() const { return basis.size(); }
};

inline WeightLayer basis(int t, int n) {
  auto hb = hall_basis(t, n);
  WeightLayer layer{t, n, {}, {}};
  for (const auto& b : hb->layer(n)) {
    layer.basis.push_back(b);
    layer.names.push_back(hb->render(b.index));
  }
  return layer;
}

/// Lie polynomial of a basic commutator: leaves are letters and [u,v] = uv - vu.
/// Equals the leading homogeneous part of the group commutator realized in series.
inline HomogeneousElement lie_expand(const HallBasis& hb, std::size_t index) {
  const auto& b = hb[index];
  if (b.is_generator()) {
    HomogeneousElement h(hb.generators(), 1);
    h[static_cast<std::size_t>(b.generator - 1)] = 1;
    return h;
  }
  const auto u = lie_expand(hb, b.left);
  const auto v = lie_expand(hb, b.right);
  return u * v - v * u;
}

inline HomogeneousElement lie_expand(const HallBasis& hb, std::size_t index, const TruncationContext& ctx) {
  if (hb[index].weight > ctx.depth())
    throw precondition_error("basic commutator weight exceeds truncation depth");
  if (hb.generators() != ctx.generators()) throw precondition_error("basis and context rank differ");
  return lie_expand(hb, index);
}

/// The integer span of the weight-n expansions inside the degree-n tensors, in Hermite
/// form, with the transform back to basic-commutator coordinates.
class LieLattice {
 public:
  LieLattice(int t, int n) : t_(t), n_(n) {
    auto hb = hall_basis(t, n);
    const auto len = TruncationContext(t, n).layer_size(n);
    IntMatrix expansions(0, len);
    for (std::size_t i = hb->layer_begin(n); i < hb->layer_end(n); ++i)
      expansions.append_row(lie_expand(*hb, i).coefficients());
    auto decomposition = hermite_decomposition(expansions);
    if (decomposition.form.rows() != expansions.rows())
      throw consistency_error("basic commutator expansions are linearly dependent");
    form_ = std::move(decomposition.form);
    transform_ = std::move(decomposition.transform);
  }

  std::size_t rank() const { return form_.rows(); }

  /// Unique integer c with sum c_i * lie_expand(b_i) = h; throws if h is outside the lattice.
  std::vector<Integer> coordinates(const HomogeneousElement& h) const {
    if (h.generators() != t_ || h.degree() != n_)
      throw precondition_error("homogeneous element has degree " + std::to_string(h.degree()) +
                               ", expected " + std::to_string(n_));
    auto d = express_in_hnf(form_, h.coefficients());
    if (!d) throw consistency_error("homogeneous element is not an integral Lie element");
    std::vector<Integer> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      if ((*d)[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j)
        if (transform_(i, j) != 0) c[j] += (*d)[i] * transform_(i, j);
    }
    return c;
  }

 private:
  int t_;
  int n_;
  IntMatrix form_;
  IntMatrix transform_;
};

inline std::shared_ptr<const LieLattice> lie_lattice(int t, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const LieLattice>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({t, n}); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const LieLattice>(t, n);
  std::lock_guard lock(mutex);
  return cache.try_emplace({t, n}, std::move(built)).first->second;
}

inline std::vector<Integer> lie_coordinates(const HomogeneousElement& h, int t, int n) {
  if (n < 1) throw precondition_error("weight must be positive");
  return lie_lattice(t, n)->coordinates(h);
}

}  // namespace nilmult

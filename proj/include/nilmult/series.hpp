#pragma once

// Integer power series in noncommuting variables X_1..X_t truncated above a
// total degree k. Group-like series (constant term 1) form a faithful model of
// the free nilpotent group F/gamma_{k+1}(F) through x_i -> 1 + X_i.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/integer.hpp"

namespace nilmult {

/// Default cap on the number of monomials a context may address.
inline constexpr std::uint64_t default_monomial_guard = 10'000'000;

class TruncationContext {
 public:
  TruncationContext(int generators, int depth) : t_(generators), k_(depth) {
    if (t_ < 1) throw precondition_error("truncation context needs at least one generator");
    if (k_ < 1) throw precondition_error("truncation depth must be positive");
    // Keep packed monomial codes well inside 64 bits.
    std::uint64_t total = 0, layer = 1;
    for (int d = 0; d <= k_; ++d) {
      total += layer;
      if (total > (std::uint64_t{1} << 40))
        throw precondition_error("truncation context addresses too many monomials");
      layer *= static_cast<std::uint64_t>(t_);
    }
  }

  int generators() const { return t_; }
  int depth() const { return k_; }

  /// Number of monomials of degree d, t^d.
  std::uint64_t layer_size(int d) const {
    std::uint64_t r = 1;
    for (int i = 0; i < d; ++i) r *= static_cast<std::uint64_t>(t_);
    return r;
  }
  /// Position of the first degree-d monomial in the dense layout.
  std::uint64_t offset(int d) const {
    std::uint64_t r = 0, layer = 1;
    for (int i = 0; i < d; ++i) {
      r += layer;
      layer *= static_cast<std::uint64_t>(t_);
    }
    return r;
  }
  /// Total monomial count, sum_{d<=k} t^d.
  std::uint64_t size() const { return offset(k_ + 1); }

  friend bool operator==(const TruncationContext&, const TruncationContext&) = default;

 private:
  int t_;
  int k_;
};

/// Throws unless the context stays below the monomial guard.
inline void check_monomial_guard(const TruncationContext& ctx, std::uint64_t guard) {
  if (ctx.size() > guard)
    throw precondition_error("context (t=" + std::to_string(ctx.generators()) +
                             ", k=" + std::to_string(ctx.depth()) + ") needs " +
                             std::to_string(ctx.size()) + " monomials, above the guard of " +
                             std::to_string(guard));
}

/// A word in the generators. Letters are packed base-t, first letter most significant,
/// so ordering by (degree, code) is degree-then-lexicographic.
struct Monomial {
  int degree = 0;
  std::uint64_t code = 0;

  static Monomial from_letters(int t, const std::vector<int>& letters) {
    Monomial m{static_cast<int>(letters.size()), 0};
    for (int l : letters) {
      if (l < 1 || l > t) throw precondition_error("monomial letter out of range");
      m.code = m.code * static_cast<std::uint64_t>(t) + static_cast<std::uint64_t>(l - 1);
    }
    return m;
  }

  /// Generator indices, 1-based.
  std::vector<int> letters(int t) const {
    std::vector<int> out(static_cast<std::size_t>(degree));
    std::uint64_t c = code;
    for (int i = degree - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(t)) + 1;
      c /= static_cast<std::uint64_t>(t);
    }
    return out;
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Renders a monomial with X, Y, Z for t <= 3 and X1, X2, ... otherwise; "1" for the empty word.
inline std::string render_monomial(int t, const Monomial& m) {
  if (m.degree == 0) return "1";
  std::string s;
  for (int l : m.letters(t)) {
    if (t <= 3)
      s += static_cast<char>('X' + (l - 1));
    else
      s += "X" + std::to_string(l);
  }
  return s;
}

/// The degree-n slice of a series: a homogeneous noncommutative polynomial, stored densely.
class HomogeneousElement {
 public:
  HomogeneousElement(int t, int n)
      : t_(t), n_(n), coeffs_(TruncationContext(t, n < 1 ? 1 : n).layer_size(n)) {}

  int generators() const { return t_; }
  int degree() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }

  const Integer& operator[](std::size_t code) const { return coeffs_[code]; }
  Integer& operator[](std::size_t code) { return coeffs_[code]; }
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  /// Nonzero terms in lexicographic order.
  std::vector<std::pair<Monomial, Integer>> terms() const {
    std::vector<std::pair<Monomial, Integer>> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) out.emplace_back(Monomial{n_, i}, coeffs_[i]);
    return out;
  }

  HomogeneousElement& operator+=(const HomogeneousElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  HomogeneousElement& operator-=(const HomogeneousElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  HomogeneousElement& operator*=(const Integer& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend HomogeneousElement operator+(HomogeneousElement a, const HomogeneousElement& b) { return a += b; }
  friend HomogeneousElement operator-(HomogeneousElement a, const HomogeneousElement& b) { return a -= b; }

  /// Noncommutative product; degrees add.
  friend HomogeneousElement operator*(const HomogeneousElement& a, const HomogeneousElement& b) {
    if (a.t_ != b.t_) throw precondition_error("homogeneous elements over different alphabets");
    HomogeneousElement c(a.t_, a.n_ + b.n_);
    const std::size_t lb = b.coeffs_.size();
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < lb; ++j)
        if (b.coeffs_[j] != 0) c.coeffs_[i * lb + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return c;
  }

  friend bool operator==(const HomogeneousElement&, const HomogeneousElement&) = default;

 private:
  void check_same(const HomogeneousElement& o) const {
    if (t_ != o.t_ || n_ != o.n_) throw precondition_error("homogeneous elements of different shape");
  }

  int t_;
  int n_;
  std::vector<Integer> coeffs_;
};

/// Dense truncated series. Coefficients of every monomial up to degree k are kept;
/// zero coefficients are never reported by terms(), and equality is coefficientwise.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(TruncationContext ctx) : ctx_(ctx), coeffs_(ctx.size()) {}

  static TruncatedSeries one(TruncationContext ctx) {
    TruncatedSeries s(ctx);
    s.coeffs_[0] = 1;
    return s;
  }

  /// 1 + X_i, the image of the i-th free generator (1-based).
  static TruncatedSeries generator(TruncationContext ctx, int i) {
    if (i < 1 || i > ctx.generators()) throw precondition_error("generator index out of range");
    TruncatedSeries s = one(ctx);
    s.coeffs_[static_cast<std::size_t>(i)] = 1;
    return s;
  }

  const TruncationContext& context() const { return ctx_; }

  const Integer& coefficient(const Monomial& m) const {
    if (m.degree > ctx_.depth()) throw precondition_error("monomial above truncation degree");
    return coeffs_[static_cast<std::size_t>(ctx_.offset(m.degree) + m.code)];
  }
  void set_coefficient(const Monomial& m, Integer value) {
    if (m.degree > ctx_.depth()) throw precondition_error("monomial above truncation degree");
    coeffs_[static_cast<std::size_t>(ctx_.offset(m.degree) + m.code)] = std::move(value);
  }

  /// Nonzero terms in (degree, lexicographic) order.
  std::vector<std::pair<Monomial, Integer>> terms() const {
    std::vector<std::pair<Monomial, Integer>> out;
    for (int d = 0; d <= ctx_.depth(); ++d) {
      const auto off = ctx_.offset(d), len = ctx_.layer_size(d);
      for (std::uint64_t i = 0; i < len; ++i)
        if (coeffs_[off + i] != 0) out.emplace_back(Monomial{d, i}, coeffs_[off + i]);
    }
    return out;
  }

  bool is_group_like() const { return coeffs_[0] == 1; }

  bool is_identity() const {
    if (coeffs_[0] != 1) return false;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }

  bool degree_is_zero(int d) const {
    const auto off = ctx_.offset(d), len = ctx_.layer_size(d);
    for (std::uint64_t i = 0; i < len; ++i)
      if (coeffs_[off + i] != 0) return false;
    return true;
  }

  const std::vector<Integer>& dense() const { return coeffs_; }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  friend TruncatedSeries inverse(const TruncatedSeries& a);

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!(a.ctx_ == b.ctx_)) throw precondition_error("series from different truncation contexts");
    const int k = a.ctx_.depth();
    const auto t = static_cast<std::uint64_t>(a.ctx_.generators());
    std::vector<std::uint64_t> off(static_cast<std::size_t>(k) + 2), len(static_cast<std::size_t>(k) + 1);
    std::vector<char> nza(static_cast<std::size_t>(k) + 1), nzb(static_cast<std::size_t>(k) + 1);
    {
      std::uint64_t o = 0, l = 1;
      for (int d = 0; d <= k; ++d) {
        off[d] = o;
        len[d] = l;
        o += l;
        l *= t;
      }
      off[k + 1] = o;
    }
    for (int d = 0; d <= k; ++d) {
      nza[d] = !a.degree_is_zero(d);
      nzb[d] = !b.degree_is_zero(d);
    }
    TruncatedSeries c(a.ctx_);
    for (int da = 0; da <= k; ++da) {
      if (!nza[da]) continue;
      for (int db = 0; da + db <= k; ++db) {
        if (!nzb[db]) continue;
        const std::uint64_t lb = len[db];
        const std::uint64_t cbase = off[da + db];
        for (std::uint64_t i = 0; i < len[da]; ++i) {
          const Integer& ai = a.coeffs_[off[da] + i];
          if (ai == 0) continue;
          Integer* out = &c.coeffs_[cbase + i * lb];
          const Integer* bb = &b.coeffs_[off[db]];
          if (ai == 1) {
            for (std::uint64_t j = 0; j < lb; ++j)
              if (bb[j] != 0) out[j] += bb[j];
          } else {
            for (std::uint64_t j = 0; j < lb; ++j)
              if (bb[j] != 0) out[j] += ai * bb[j];
          }
        }
      }
    }
    return c;
  }

 private:
  TruncationContext ctx_;
  std::vector<Integer> coeffs_;
};

inline TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

inline TruncatedSeries generator_series(TruncationContext ctx, int i) {
  return TruncatedSeries::generator(ctx, i);
}

/// Two-sided inverse of a group-like series, solved degree by degree.
inline TruncatedSeries inverse(const TruncatedSeries& a) {
  if (!a.is_group_like()) throw precondition_error("inverse of a series whose constant term is not 1");
  const auto& ctx = a.context();
  const int k = ctx.depth();
  TruncatedSeries b = TruncatedSeries::one(ctx);
  // b_n = -sum_{j=1..n} a_j b_{n-j}
  std::vector<Integer>& bc = b.coeffs_;
  const std::vector<Integer>& ac = a.coeffs_;
  for (int n = 1; n <= k; ++n) {
    const std::uint64_t cbase = ctx.offset(n);
    for (int j = 1; j <= n; ++j) {
      if (a.degree_is_zero(j)) continue;
      const std::uint64_t la = ctx.layer_size(j), lb = ctx.layer_size(n - j);
      const std::uint64_t aoff = ctx.offset(j), boff = ctx.offset(n - j);
      for (std::uint64_t i = 0; i < la; ++i) {
        const Integer& ai = ac[aoff + i];
        if (ai == 0) continue;
        for (std::uint64_t q = 0; q < lb; ++q) {
          const Integer& bq = bc[boff + q];
          if (bq != 0) bc[cbase + i * lb + q] -= ai * bq;
        }
      }
    }
  }
  return b;
}

/// e-fold product; negative exponents go through the inverse.
inline TruncatedSeries power(const TruncatedSeries& a, Integer e) {
  if (!a.is_group_like()) throw precondition_error("power of a series whose constant term is not 1");
  TruncatedSeries base = e < 0 ? inverse(a) : a;
  if (e < 0) e = -e;
  TruncatedSeries result = TruncatedSeries::one(a.context());
  bool first = true;
  while (e != 0) {
    if (boost::multiprecision::bit_test(e, 0)) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

inline TruncatedSeries power(const TruncatedSeries& a, long long e) { return power(a, Integer(e)); }
inline TruncatedSeries power(const TruncatedSeries& a, int e) { return power(a, Integer(e)); }

/// [a,b] = a^-1 b^-1 a b.
inline TruncatedSeries group_commutator(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!(a.context() == b.context())) throw precondition_error("series from different truncation contexts");
  return inverse(a) * inverse(b) * a * b;
}

/// a^h = h^-1 a h.
inline TruncatedSeries conjugate(const TruncatedSeries& a, const TruncatedSeries& h) {
  return inverse(h) * a * h;
}

/// Smallest positive degree carrying a nonzero coefficient; nullopt for the identity.
/// For a group element this is the largest n with the element in gamma_n (below k+1).
inline std::optional<int> min_positive_degree(const TruncatedSeries& a) {
  for (int d = 1; d <= a.context().depth(); ++d)
    if (!a.degree_is_zero(d)) return d;
  return std::nullopt;
}

inline HomogeneousElement homogeneous_part(const TruncatedSeries& a, int n) {
  const auto& ctx = a.context();
  if (n < 1 || n > ctx.depth()) throw precondition_error("homogeneous degree out of range");
  HomogeneousElement h(ctx.generators(), n);
  const auto off = ctx.offset(n);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = a.dense()[off + i];
  return h;
}

}  // namespace nilmult

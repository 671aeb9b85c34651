#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "wakimoto/rational.hpp"

namespace wakimoto {

/// One factor g(index)^exp of an ordered monomial. The meaning of index is fixed
/// by the owning module (for oscillators it is the absolute value of the mode).
template <class Gen>
struct Factor {
  Gen gen{};
  int index = 0;
  int exp = 0;

  friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// Commutative-style ordered monomial: factors sorted by generator ascending,
/// then index descending, each (gen, index) at most once.
///
/// Factors are packed into 32-bit words (generator, biased index, exponent) so
/// that the packed order is the canonical order and short monomials stay inline.
template <class Gen>
class Monomial {
 public:
  using factor_type = Factor<Gen>;
  using storage_type = boost::container::small_vector<std::uint32_t, 6>;

  static constexpr int kIndexBias = 2047;
  static constexpr int kMaxExp = 0xffff;

  class FactorRange {
   public:
    class iterator {
     public:
      explicit iterator(const std::uint32_t* p) : p_(p) {}
      factor_type operator*() const { return unpack(*p_); }
      iterator& operator++() {
        ++p_;
        return *this;
      }
      bool operator!=(const iterator& o) const { return p_ != o.p_; }

     private:
      const std::uint32_t* p_;
    };
    FactorRange(const std::uint32_t* b, const std::uint32_t* e) : b_(b), e_(e) {}
    iterator begin() const { return iterator(b_); }
    iterator end() const { return iterator(e_); }

   private:
    const std::uint32_t* b_;
    const std::uint32_t* e_;
  };

  Monomial() = default;

  FactorRange factors() const { return FactorRange(data_.data(), data_.data() + data_.size()); }
  std::size_t size() const { return data_.size(); }
  factor_type factor(std::size_t i) const { return unpack(data_[i]); }
  bool empty() const { return data_.empty(); }

  int exponent(Gen g, int index) const {
    std::uint32_t k = key(g, index);
    for (std::uint32_t w : data_) {
      if ((w >> 16) == k) return static_cast<int>(w & 0xffffu);
    }
    return 0;
  }

  int word_length() const {
    int n = 0;
    for (std::uint32_t w : data_) n += static_cast<int>(w & 0xffffu);
    return n;
  }

  /// Adds delta to the exponent of g(index); the result must stay non-negative.
  Monomial with(Gen g, int index, int delta) const {
    Monomial m(*this);
    m.bump(g, index, delta);
    return m;
  }

  void bump(Gen g, int index, int delta) {
    if (delta == 0) return;
    if (index < -kIndexBias || index > kIndexBias) throw std::out_of_range("monomial index out of range");
    std::uint32_t k = key(g, index);
    auto it = data_.begin();
    while (it != data_.end() && (*it >> 16) < k) ++it;
    if (it != data_.end() && (*it >> 16) == k) {
      int e = static_cast<int>(*it & 0xffffu) + delta;
      if (e < 0 || e > kMaxExp) throw std::out_of_range("monomial exponent out of range");
      if (e == 0) {
        data_.erase(it);
      } else {
        *it = (k << 16) | static_cast<std::uint32_t>(e);
      }
    } else {
      if (delta < 0 || delta > kMaxExp) throw std::out_of_range("monomial exponent out of range");
      data_.insert(it, (k << 16) | static_cast<std::uint32_t>(delta));
    }
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.data_ == b.data_; }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t w : data_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  static std::uint32_t key(Gen g, int index) {
    return (static_cast<std::uint32_t>(g) << 12) | static_cast<std::uint32_t>(kIndexBias - index);
  }
  static factor_type unpack(std::uint32_t w) {
    factor_type f;
    f.gen = static_cast<Gen>(w >> 28);
    f.index = kIndexBias - static_cast<int>((w >> 16) & 0xfffu);
    f.exp = static_cast<int>(w & 0xffffu);
    return f;
  }

  storage_type data_;
};

template <class M>
struct MonomialHash {
  std::size_t operator()(const M& m) const { return m.hash(); }
};

/// Finite Q-linear combination of keys; zero coefficients are never stored.
template <class Key>
class LinComb {
 public:
  using map_type = std::map<Key, Rational>;

  LinComb() = default;
  explicit LinComb(const Key& k, const Rational& c = Rational(1)) { add(k, c); }

  const map_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add_scaled(const LinComb& other, const Rational& c) {
    if (c.is_zero()) return;
    for (const auto& [k, v] : other.terms_) add(k, v * c);
  }

  LinComb& operator+=(const LinComb& o) {
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  LinComb& operator*=(const Rational& c) {
    if (c.is_zero()) {
      terms_.clear();
    } else {
      for (auto& [k, v] : terms_) v *= c;
    }
    return *this;
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(LinComb a, const Rational& c) { return a *= c; }
  friend LinComb operator*(const Rational& c, LinComb a) { return a *= c; }
  friend bool operator==(const LinComb&, const LinComb&) = default;

 private:
  map_type terms_;
};

using SparseTerm = std::pair<int, Rational>;
/// Sparse vector over interned ids, sorted by id, no zero entries.
using SparseVec = std::vector<SparseTerm>;

/// Assigns dense ids to monomials in first-seen order.
template <class M>
class Interner {
 public:
  int intern(const M& m) {
    auto [it, inserted] = ids_.try_emplace(m, static_cast<int>(items_.size()));
    if (inserted) items_.push_back(m);
    return it->second;
  }
  std::optional<int> find(const M& m) const {
    auto it = ids_.find(m);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const M& at(int id) const { return items_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return items_.size(); }

 private:
  std::unordered_map<M, int, MonomialHash<M>> ids_;
  std::vector<M> items_;
};

/// Dense scratch accumulator over ids with a touched list.
class Accumulator {
 public:
  void add(int id, const Rational& c) {
    auto i = static_cast<std::size_t>(id);
    if (i >= vals_.size()) {
      vals_.resize(i + 1 + i / 2);
      mark_.resize(vals_.size(), 0);
    }
    if (!mark_[i]) {
      mark_[i] = 1;
      touched_.push_back(id);
    }
    vals_[i] += c;
  }

  void add_scaled(const SparseVec& v, const Rational& c) {
    if (c.is_zero()) return;
    for (const auto& [id, x] : v) add(id, x * c);
  }

  bool is_zero() const {
    for (int id : touched_) {
      if (!vals_[static_cast<std::size_t>(id)].is_zero()) return false;
    }
    return true;
  }

  /// Returns the accumulated vector and resets.
  SparseVec take() {
    std::sort(touched_.begin(), touched_.end());
    SparseVec out;
    for (int id : touched_) {
      auto i = static_cast<std::size_t>(id);
      if (!vals_[i].is_zero()) out.emplace_back(id, std::move(vals_[i]));
      vals_[i] = Rational(0);
      mark_[i] = 0;
    }
    touched_.clear();
    return out;
  }

  void clear() {
    for (int id : touched_) {
      auto i = static_cast<std::size_t>(id);
      vals_[i] = Rational(0);
      mark_[i] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<Rational> vals_;
  std::vector<char> mark_;
  std::vector<int> touched_;
};

/// Stack of accumulators for recursive computations.
class AccumulatorPool {
 public:
  class Lease {
   public:
    explicit Lease(AccumulatorPool& p) : pool_(p), acc_(p.acquire()) {}
    ~Lease() { pool_.release(); }
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    Accumulator& operator*() { return acc_; }
    Accumulator* operator->() { return &acc_; }

   private:
    AccumulatorPool& pool_;
    Accumulator& acc_;
  };

 private:
  Accumulator& acquire() {
    if (depth_ == pool_.size()) pool_.push_back(std::make_unique<Accumulator>());
    return *pool_[depth_++];
  }
  void release() {
    --depth_;
    pool_[depth_]->clear();
  }

  std::vector<std::unique_ptr<Accumulator>> pool_;
  std::size_t depth_ = 0;
};

}  // namespace wakimoto

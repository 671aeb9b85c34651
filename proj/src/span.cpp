#include "wakimoto/span.hpp"

#include <algorithm>
#include <numeric>

namespace wakimoto {

namespace {

using Key = std::uint64_t;
using Row = std::vector<std::pair<Key, Rational>>;

constexpr int kIdBits = 32;

/// alpha * v + beta * r, dropping cancelled entries.
Row combine(const Row& v, const Rational& alpha, const Row& r, const Rational& beta) {
  Row out;
  out.reserve(v.size() + r.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < v.size() || j < r.size()) {
    if (j == r.size() || (i < v.size() && v[i].first < r[j].first)) {
      out.emplace_back(v[i].first, v[i].second * alpha);
      ++i;
    } else if (i == v.size() || r[j].first < v[i].first) {
      out.emplace_back(r[j].first, r[j].second * beta);
      ++j;
    } else {
      Rational x = v[i].second * alpha;
      x += r[j].second * beta;
      if (!x.is_zero()) out.emplace_back(v[i].first, std::move(x));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Scales an integer row so its entries are coprime and the leading one positive.
void make_primitive(Row& v) {
  if (v.empty()) return;
  bool small = std::all_of(v.begin(), v.end(), [](const auto& e) { return e.second.is_small(); });
  Rational g;
  if (small) {
    std::uint64_t acc = 0;
    for (const auto& e : v) {
      std::int64_t n = e.second.small_num();
      std::uint64_t a = n < 0 ? std::uint64_t(0) - std::uint64_t(n) : std::uint64_t(n);
      acc = std::gcd(acc, a);
      if (acc == 1) break;
    }
    if (acc > std::uint64_t(INT64_MAX)) return;
    g = Rational(static_cast<long long>(acc));
  } else {
    mpz_class acc = 0;
    for (const auto& e : v) {
      mpz_gcd(acc.get_mpz_t(), acc.get_mpz_t(), e.second.numerator().get_mpz_t());
      if (acc == 1) break;
    }
    g = Rational(mpq_class(acc));
  }
  if (v.front().second.sign() < 0) g = -g;
  if (g == Rational(1)) return;
  for (auto& e : v) e.second /= g;
}

/// Multiplies a rational row by the lcm of its denominators.
void integerize(Row& v) {
  mpz_class l = 1;
  bool any = false;
  for (const auto& e : v) {
    if (e.second.is_integer()) continue;
    any = true;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.denominator().get_mpz_t());
  }
  if (!any) return;
  Rational s{mpq_class(l)};
  for (auto& e : v) e.second *= s;
}

SparseVec to_sparse(const Row& v) {
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [k, c] : v) out.emplace_back(static_cast<int>(k & 0xffffffffu), c);
  std::sort(out.begin(), out.end(), [](const SparseTerm& a, const SparseTerm& b) { return a.first < b.first; });
  return out;
}

}  // namespace

SpanEngine::SpanEngine(TierFn tier) : tier_fn_(std::move(tier)) {}

SpanEngine::Key SpanEngine::key(int id) {
  auto it = tiers_.find(id);
  if (it == tiers_.end()) it = tiers_.emplace(id, tier_fn_(id)).first;
  return (static_cast<Key>(it->second) << kIdBits) | static_cast<std::uint32_t>(id);
}

SpanEngine::Row SpanEngine::to_row(const SparseVec& v) {
  Row r;
  r.reserve(v.size());
  for (const auto& [id, c] : v) {
    if (!c.is_zero()) r.emplace_back(key(id), c);
  }
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return r;
}

void SpanEngine::eliminate(Row& v, bool full) const {
  std::size_t i = 0;
  while (i < v.size()) {
    auto it = pivots_.find(v[i].first);
    if (it == pivots_.end()) {
      if (!full) return;
      ++i;
      continue;
    }
    const Row& r = rows_[it->second];
    Rational a = r.front().second;
    Rational b = -v[i].second;
    v = combine(v, a, r, b);
    make_primitive(v);
  }
}

std::optional<int> SpanEngine::insert(const SparseVec& v) {
  Row r = to_row(v);
  integerize(r);
  make_primitive(r);
  eliminate(r, false);
  if (r.empty()) return std::nullopt;
  pivots_.emplace(r.front().first, rows_.size());
  int t = static_cast<int>(r.front().first >> kIdBits);
  rows_.push_back(std::move(r));
  return t;
}

bool SpanEngine::contains(const SparseVec& v) {
  Row r = to_row(v);
  integerize(r);
  make_primitive(r);
  eliminate(r, false);
  return r.empty();
}

SparseVec SpanEngine::reduce(const SparseVec& v) {
  Row r = to_row(v);
  integerize(r);
  make_primitive(r);
  eliminate(r, true);
  return to_sparse(r);
}

SparseVec SpanEngine::project(const SparseVec& v) {
  Row r = to_row(v);
  std::size_t i = 0;
  while (i < r.size()) {
    auto it = pivots_.find(r[i].first);
    if (it == pivots_.end()) {
      ++i;
      continue;
    }
    const Row& p = rows_[it->second];
    Rational b = -(r[i].second / p.front().second);
    r = combine(r, Rational(1), p, b);
  }
  return to_sparse(r);
}

std::size_t SpanEngine::rank_from_tier(int tier) const {
  std::size_t n = 0;
  for (const auto& r : rows_) {
    if (static_cast<int>(r.front().first >> kIdBits) >= tier) ++n;
  }
  return n;
}

bool SpanEngine::is_pivot(int id) { return pivots_.count(key(id)) != 0; }

SparseVec SpanEngine::row(std::size_t i) const { return to_sparse(rows_[i]); }

int SpanEngine::pivot_id(std::size_t i) const { return static_cast<int>(rows_[i].front().first & 0xffffffffu); }

int SpanEngine::pivot_tier(std::size_t i) const { return static_cast<int>(rows_[i].front().first >> kIdBits); }

Closure::Closure(SpanEngine::TierFn tier, ExpandFn expand, std::size_t max_vectors, int expand_tier)
    : span_(std::move(tier)), expand_(std::move(expand)), max_vectors_(max_vectors), expand_tier_(expand_tier) {}

void Closure::add(const SparseVec& v) {
  if (capped_) return;
  auto t = span_.insert(v);
  if (t && *t >= expand_tier_) queue_.push_back(span_.rank() - 1);
  if (span_.rank() >= max_vectors_) {
    capped_ = true;
    saturated_ = false;
  }
}

void Closure::run() {
  while (head_ < queue_.size() && !capped_) {
    SparseVec v = span_.row(queue_[head_++]);
    expand_(v, [&](SparseVec w) {
      if (!capped_ && !w.empty()) add(w);
    });
  }
  if (head_ < queue_.size()) saturated_ = false;
}

}  // namespace wakimoto

#include "strategem/ldim.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace strategem {

namespace {

int floor_log2(std::size_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

std::vector<FeatureId> all_points(std::size_t n) {
  std::vector<FeatureId> d(n);
  std::iota(d.begin(), d.end(), FeatureId{0});
  return d;
}

}  // namespace

LdimOracle::LdimOracle(std::shared_ptr<const HypothesisClass> H)
    : LdimOracle(H, all_points(H ? H->node_count() : 0)) {}

LdimOracle::LdimOracle(std::shared_ptr<const HypothesisClass> H, std::vector<FeatureId> domain)
    : H_(std::move(H)), domain_(std::move(domain)) {
  if (!H_) throw std::invalid_argument("LdimOracle needs a hypothesis class");
  positives_.assign(H_->node_count(), MemberSet(H_->size()));
  for (std::size_t i = 0; i < H_->size(); ++i) {
    for (std::size_t x = 0; x < H_->node_count(); ++x) {
      if ((*H_)[i](static_cast<FeatureId>(x)) != 0) positives_[x].insert(i);
    }
  }
  for (auto x : domain_) {
    if (x >= H_->node_count()) throw std::invalid_argument("domain point outside the class's node set");
  }
}

MemberSet LdimOracle::restrict(const MemberSet& version, FeatureId x, int y) const {
  return y != 0 ? version & positives_.at(x) : version.minus(positives_.at(x));
}

int LdimOracle::ldim(const MemberSet& version) const {
  const auto n = version.count();
  if (n <= 1) return static_cast<int>(n) - 1;
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(version); it != memo_.end()) return it->second;
  }
  const int value = compute(version);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(version, value);
  return value;
}

int LdimOracle::compute(const MemberSet& version) const {
  const int upper = floor_log2(version.count());
  int best = 0;
  for (auto x : domain_) {
    const auto one = version & positives_[x];
    const auto n1 = one.count();
    if (n1 == 0 || n1 == version.count()) continue;
    const auto zero = version.minus(positives_[x]);
    // 1 + floor(log2(min side)) bounds this split from above.
    if (1 + floor_log2(std::min(n1, zero.count())) <= best) continue;
    const int a = ldim(one);
    if (1 + a <= best) continue;
    const int candidate = 1 + std::min(a, ldim(zero));
    best = std::max(best, candidate);
    if (best == upper) break;
  }
  return best;
}

int LdimOracle::soa_predict(const MemberSet& version, FeatureId x) const {
  if (version.empty()) throw std::invalid_argument("SOA prediction on an empty version space");
  const int d1 = ldim(restrict(version, x, 1));
  const int d0 = ldim(restrict(version, x, 0));
  return d1 >= d0 ? 1 : 0;
}

MemberSet LdimOracle::soa_update(const MemberSet& version, FeatureId x, int y) const {
  auto next = restrict(version, x, y);
  if (next.empty()) {
    throw RealizabilityError("no hypothesis in the version space labels node " + std::to_string(x) + " as " +
                             std::to_string(y));
  }
  return next;
}

std::size_t LdimOracle::memo_size() const {
  std::lock_guard lock(memo_mutex_);
  return memo_.size();
}

int ldim(const HypothesisClass& H, std::span<const FeatureId> domain) {
  auto shared = std::make_shared<const HypothesisClass>(H);
  LdimOracle oracle(shared, std::vector<FeatureId>(domain.begin(), domain.end()));
  return oracle.ldim(oracle.full());
}

int ldim(const HypothesisClass& H) {
  auto shared = std::make_shared<const HypothesisClass>(H);
  LdimOracle oracle(shared);
  return oracle.ldim(oracle.full());
}

}  // namespace strategem

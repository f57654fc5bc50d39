#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "strategem/member_set.hpp"
#include "strategem/predictors.hpp"

namespace strategem {

// Littlestone dimension and SOA over version spaces of a fixed class.
//
// Version spaces are MemberSets over the class's member indices. Results are
// memoized per oracle; the memo is mutex-guarded so one oracle may be shared by
// concurrent games.
class LdimOracle {
 public:
  explicit LdimOracle(std::shared_ptr<const HypothesisClass> H);
  // Restricts the mistake-tree search to the given points.
  LdimOracle(std::shared_ptr<const HypothesisClass> H, std::vector<FeatureId> domain);

  const HypothesisClass& hypotheses() const { return *H_; }
  const std::shared_ptr<const HypothesisClass>& shared_hypotheses() const { return H_; }
  MemberSet full() const { return MemberSet::full(H_->size()); }

  // -1 for the empty set, 0 for singletons.
  int ldim(const MemberSet& version) const;

  MemberSet restrict(const MemberSet& version, FeatureId x, int y) const;

  // Label b whose restricted sub-class has the larger Ldim; ties predict 1.
  int soa_predict(const MemberSet& version, FeatureId x) const;
  // Throws RealizabilityError if no member agrees with (x, y).
  MemberSet soa_update(const MemberSet& version, FeatureId x, int y) const;

  std::size_t memo_size() const;

 private:
  int compute(const MemberSet& version) const;

  std::shared_ptr<const HypothesisClass> H_;
  std::vector<FeatureId> domain_;
  std::vector<MemberSet> positives_;  // positives_[x] = {i : H[i](x) = 1}
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<MemberSet, int, MemberSetHash> memo_;
};

// Littlestone dimension of a whole class over `domain`. Throws
// std::invalid_argument on an empty class.
int ldim(const HypothesisClass& H, std::span<const FeatureId> domain);
int ldim(const HypothesisClass& H);

}  // namespace strategem

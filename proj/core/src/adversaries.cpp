#include "strategem/adversaries.hpp"

#include <algorithm>
#include <stdexcept>

#include "strategem/errors.hpp"

namespace strategem {

std::size_t TwoLayerLayout::member_index(const std::vector<std::size_t>& digits) const {
  std::size_t idx = 0;
  for (auto d : digits) idx = idx * leaves() + d;
  return idx;
}

// --- TwoLayerAdversary -------------------------------------------------------

TwoLayerAdversary::TwoLayerAdversary(TwoLayerLayout layout, bool clique, std::optional<std::size_t> fixed_target)
    : layout_(layout), fixed_(layout.copies) {
  if (layout_.k1 == 0 || layout_.k2 == 0 || layout_.copies == 0) {
    throw ConfigError("two-layer adversaries need k1, k2, d >= 1");
  }
  const auto base = clique ? make_two_layer_clique(layout_.k1, layout_.k2) : make_two_layer(layout_.k1, layout_.k2);
  graph_ = std::make_shared<const ManipulationGraph>(disjoint_union(base, layout_.copies));
  H_ = std::make_shared<const HypothesisClass>(
      product_class(make_leaf_singletons(layout_.k1, layout_.k2), layout_.copies));
  survivors_.assign(layout_.copies, MemberSet::full(layout_.leaves()));
  if (fixed_target) {
    if (*fixed_target >= H_->size()) throw ConfigError("arb target index out of range");
    auto rest = *fixed_target;
    for (std::size_t c = layout_.copies; c-- > 0;) {
      fixed_[c] = rest % layout_.leaves();
      rest /= layout_.leaves();
    }
  }
}

std::size_t TwoLayerAdversary::target_digit(std::size_t c) const {
  return fixed_[c] ? *fixed_[c] : survivors_[c].first();
}

std::optional<std::size_t> TwoLayerAdversary::target() const {
  std::vector<std::size_t> digits(layout_.copies);
  for (std::size_t c = 0; c < layout_.copies; ++c) digits[c] = target_digit(c);
  return layout_.member_index(digits);
}

FeatureId TwoLayerAdversary::resolve_x(const RoundRecord& record) const {
  if (!record.deferred_copy) return record.x;
  const auto c = *record.deferred_copy;
  return layout_.middle(c, layout_.parent(target_digit(c)));
}

bool TwoLayerAdversary::eliminable(std::size_t c, std::size_t m) const {
  if (!survivors_[c].contains(m)) return false;
  if (fixed_[c]) return m != *fixed_[c];
  return survivors_[c].count() >= 2;
}

std::vector<std::size_t> TwoLayerAdversary::live_middles(std::size_t c) const {
  std::vector<std::size_t> out;
  survivors_[c].for_each([&](std::size_t m) {
    const auto i = layout_.parent(m);
    if (out.empty() || out.back() != i) out.push_back(i);
  });
  return out;
}

bool TwoLayerAdversary::forces(const RoundView& view, FeatureId x, int y, std::optional<FeatureId> pref) const {
  return view.committed(view.agent.preview(view.committed, x, pref)) != y;
}

std::optional<FeatureId> TwoLayerAdversary::deferred_forcing(const RoundView& view, std::size_t c,
                                                             std::optional<FeatureId> pref) const {
  std::optional<FeatureId> shared;
  for (auto i : live_middles(c)) {
    const auto v = view.agent.preview(view.committed, layout_.middle(c, i), pref);
    if (view.committed(v) != 0) return std::nullopt;
    if (shared && *shared != v) return std::nullopt;
    shared = v;
  }
  return shared;
}

Emission TwoLayerAdversary::deferred(std::size_t c, std::optional<FeatureId> pref) const {
  // x is a placeholder: the first live middle. resolve_x gives the real one.
  return Emission{layout_.middle(c, live_middles(c).front()), 1, pref, c};
}

std::optional<Emission> TwoLayerAdversary::positive_leaf_case(const RoundView& view, std::size_t c) {
  // Prefer leaves that are already eliminated: they cost nothing.
  std::optional<std::size_t> fresh;
  for (std::size_t m = 0; m < layout_.leaves(); ++m) {
    const auto x = layout_.leaf(c, m);
    if (view.committed(x) == 0 || !forces(view, x, 0, std::nullopt)) continue;
    if (!survivors_[c].contains(m)) {
      last_case_ = "leaf-eliminated";
      return Emission{x, 0, std::nullopt, std::nullopt};
    }
    if (!fresh && eliminable(c, m)) fresh = m;
  }
  if (!fresh) return std::nullopt;
  survivors_[c].erase(*fresh);
  last_case_ = "leaf-eliminate";
  return Emission{layout_.leaf(c, *fresh), 0, std::nullopt, std::nullopt};
}

void TwoLayerAdversary::observe(const RoundRecord&) {}

nlohmann::json TwoLayerAdversary::diagnostics() const {
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& s : survivors_) sizes.push_back(s.count());
  return {{"case", last_case_}, {"survivors", sizes}};
}

std::optional<double> TwoLayerAdversary::certified_lower_bound() const {
  return static_cast<double>(two_layer_lower_bound(layout_.k1, layout_.k2, layout_.copies));
}

// --- RevealedArbAdversary ----------------------------------------------------

RevealedArbAdversary::RevealedArbAdversary(std::size_t k1, std::size_t k2, std::size_t copies,
                                           std::optional<std::size_t> fixed_target)
    : TwoLayerAdversary(TwoLayerLayout{k1, k2, copies}, false, fixed_target) {}

std::optional<Emission> RevealedArbAdversary::emit(const RoundView& view) {
  const auto& h = view.committed;
  for (std::size_t c = 0; c < layout_.copies; ++c) {
    const auto hub = layout_.hub(c);
    bool all_negative = true;
    for (FeatureId x = hub; x < hub + layout_.per_copy(); ++x) all_negative = all_negative && h(x) == 0;

    if (all_negative) {
      if (deferred_forcing(view, c, hub)) {
        last_case_ = "all-negative";
        return deferred(c, hub);
      }
      continue;
    }
    if (h(hub) == 1 && forces(view, hub, 0, hub)) {
      last_case_ = "hub-positive";
      return Emission{hub, 0, hub, std::nullopt};
    }
    for (std::size_t i = 1; i <= layout_.k1; ++i) {
      const auto mid = layout_.middle(c, i);
      if (h(mid) == 1 && forces(view, hub, 0, mid)) {
        last_case_ = "middle-positive";
        return Emission{hub, 0, mid, std::nullopt};
      }
    }
    if (auto e = positive_leaf_case(view, c)) return e;
  }
  end_reason_ = "adversary-exhausted";
  return std::nullopt;
}

// --- GammaZeroAdversary ------------------------------------------------------

GammaZeroAdversary::GammaZeroAdversary(std::size_t k1, std::size_t k2, std::size_t copies)
    : TwoLayerAdversary(TwoLayerLayout{k1, k2, copies}, true, std::nullopt) {}

std::optional<Emission> GammaZeroAdversary::try_copy(const RoundView& view, const BinaryPredictor& prev,
                                                     std::size_t c) {
  const auto& cur = view.committed;
  const auto hub = layout_.hub(c);

  if (prev(hub) == 1) {
    if (cur(hub) == 1 && forces(view, hub, 0, hub)) {
      last_case_ = "prev-hub/cur-hub";
      return Emission{hub, 0, hub, std::nullopt};
    }
    if (cur(hub) == 0 && deferred_forcing(view, c, hub)) {
      last_case_ = "prev-hub/common-move";
      return deferred(c, hub);
    }
  }
  if (auto e = positive_leaf_case(view, c)) return e;

  // Every agent at x_0 or at a middle can reach each middle through the clique.
  std::size_t best = 1;
  for (std::size_t i = 2; i <= layout_.k1; ++i) {
    if (prev(layout_.middle(c, i)) > prev(layout_.middle(c, best))) best = i;
  }
  std::vector<std::size_t> order{best};
  for (std::size_t i = 1; i <= layout_.k1; ++i) {
    if (i != best) order.push_back(i);
  }
  for (auto i : order) {
    const auto mid = layout_.middle(c, i);
    if (cur(mid) == 1 && forces(view, hub, 0, mid)) {
      last_case_ = "middle/cur-positive";
      return Emission{hub, 0, mid, std::nullopt};
    }
    if (cur(mid) == 0 && deferred_forcing(view, c, mid)) {
      last_case_ = "middle/common-move";
      return deferred(c, mid);
    }
  }
  return std::nullopt;
}

std::optional<Emission> GammaZeroAdversary::emit(const RoundView& view) {
  const auto& prev = view.past.empty() ? view.committed : view.past.back();
  for (std::size_t c = 0; c < layout_.copies; ++c) {
    if (auto e = try_copy(view, prev, c)) return e;
  }
  // Nothing forces this round; x_0 is negative under every member.
  last_case_ = "idle";
  return Emission{layout_.hub(0), 0, std::nullopt, std::nullopt};
}

// --- GammaGeneralAdversary ---------------------------------------------------

namespace {

FeatureId star_base(std::size_t i) { return static_cast<FeatureId>(3 * i); }
FeatureId star_left(std::size_t i) { return static_cast<FeatureId>(3 * i + 1); }
FeatureId star_right(std::size_t i) { return static_cast<FeatureId>(3 * i + 2); }

}  // namespace

GammaGeneralAdversary::GammaGeneralAdversary(std::size_t stars, Rational gamma)
    : stars_(stars), gamma_(std::move(gamma)) {
  if (stars_ < 2) throw ConfigError("gammaGen needs at least two stars");
  if (!(gamma_ > 0 && gamma_ < 1)) throw ConfigError("gammaGen gamma must lie in (0, 1)");
  window_ = terminal_window(gamma_);
  gap_goal_ = gap_goal(gamma_);
  graph_ = std::make_shared<const ManipulationGraph>(make_stars(stars_));
  H_ = std::make_shared<const HypothesisClass>(make_star_class(stars_));
  sums_.assign(graph_->node_count(), Rational(0));
  survivors_ = MemberSet::full(H_->size());
  for (int y = 0; y < 2; ++y) labels_[y].assign(graph_->node_count(), MemberSet(H_->size()));
  for (std::size_t k = 0; k < H_->size(); ++k) {
    for (FeatureId x = 0; x < graph_->node_count(); ++x) labels_[strategic_label((*H_)[k], *graph_, x)][x].insert(k);
  }
}

void GammaGeneralAdversary::fold(std::span<const BinaryPredictor> past) {
  for (; folded_ < past.size(); ++folded_) {
    for (std::size_t x = 0; x < sums_.size(); ++x) {
      sums_[x] = gamma_ * sums_[x] + past[folded_](static_cast<FeatureId>(x));
    }
  }
}

MemberSet GammaGeneralAdversary::agreeing(FeatureId x, int y) const { return survivors_ & labels_[y][x]; }

std::optional<Emission> GammaGeneralAdversary::forcing(const RoundView& view, bool allow_elimination) {
  const auto alive = survivors_.count();
  for (FeatureId x = 0; x < graph_->node_count(); ++x) {
    for (int y = 0; y < 2; ++y) {
      const auto keep = agreeing(x, y);
      const auto kept = keep.count();
      if (kept == 0) continue;
      const auto dropped = alive - kept;
      if (dropped > (allow_elimination ? 1U : 0U)) continue;
      if (dropped == 1 && alive < 2) continue;
      std::vector<std::optional<FeatureId>> prefs{std::nullopt};
      for (auto v : view.agent.candidates(view.committed, x)) prefs.emplace_back(v);
      for (const auto& pref : prefs) {
        const auto v = view.agent.preview(view.committed, x, pref);
        if (view.committed(v) == y) continue;
        survivors_ = keep;
        last_case_ = dropped == 0 ? "force" : "force-eliminate";
        return Emission{x, y, pref, std::nullopt};
      }
    }
  }
  return std::nullopt;
}

std::optional<Emission> GammaGeneralAdversary::terminal(const RoundView& view) {
  const auto i = *target_;
  const auto& h_star = (*H_)[i];
  last_lr_ = sums_[star_left(i)] > sums_[star_right(i)];
  std::vector<FeatureId> order{star_base(i), star_left(i), star_right(i)};
  for (FeatureId x = 0; x < graph_->node_count(); ++x) {
    if (x / 3 != i) order.push_back(x);
  }
  for (auto x : order) {
    const int y = strategic_label(h_star, *graph_, x);
    std::vector<std::optional<FeatureId>> prefs{std::nullopt};
    for (auto v : view.agent.candidates(view.committed, x)) prefs.emplace_back(v);
    for (const auto& pref : prefs) {
      if (view.committed(view.agent.preview(view.committed, x, pref)) != y) {
        last_case_ = "terminal-force";
        return Emission{x, y, pref, std::nullopt};
      }
    }
  }
  last_case_ = "terminal-idle";
  return Emission{star_base(i), 1, std::nullopt, std::nullopt};
}

std::optional<Emission> GammaGeneralAdversary::emit(const RoundView& view) {
  fold(view.past);
  if (phase_ == Phase::kShrink) {
    std::optional<std::size_t> chosen;
    survivors_.for_each([&](std::size_t i) {
      if (!chosen && sums_[star_left(i)] - sums_[star_right(i)] > gap_goal_) chosen = i;
    });
    gap_entry_ = chosen.has_value();
    if (!chosen && survivors_.count() == 1) chosen = survivors_.first();
    if (chosen) {
      target_ = chosen;
      survivors_ = MemberSet(H_->size());
      survivors_.insert(*chosen);
      phase_ = Phase::kTerminal;
    }
  }
  if (phase_ == Phase::kTerminal) {
    if (terminal_rounds_ == window_) {
      phase_ = Phase::kDone;
      end_reason_ = "terminal-window-complete";
      return std::nullopt;
    }
    ++terminal_rounds_;
    return terminal(view);
  }
  if (phase_ == Phase::kDone) return std::nullopt;

  if (auto e = forcing(view, false)) return e;
  if (auto e = forcing(view, true)) return e;
  // (x_{i,B}, 1) is labelled 1 by every member: each star has a positive leaf.
  last_case_ = "idle";
  return Emission{star_base(survivors_.first()), 1, std::nullopt, std::nullopt};
}

void GammaGeneralAdversary::observe(const RoundRecord&) {}

std::optional<std::size_t> GammaGeneralAdversary::target() const {
  if (target_) return target_;
  return survivors_.first();
}

nlohmann::json GammaGeneralAdversary::diagnostics() const {
  nlohmann::json d{{"case", last_case_},
                   {"phase", phase_ == Phase::kShrink ? "shrink" : phase_ == Phase::kTerminal ? "terminal" : "done"},
                   {"survivors", survivors_.count()}};
  if (phase_ == Phase::kTerminal) {
    d["target_star"] = *target_;
    d["window_round"] = terminal_rounds_;
    d["left_above_right"] = last_lr_;
    d["entry"] = gap_entry_ ? "gap" : "singleton";
  }
  return d;
}

std::optional<double> GammaGeneralAdversary::certified_lower_bound() const {
  return static_cast<double>(gamma_general_lower_bound(gamma_, stars_));
}

// --- MeanBasedAdversary ------------------------------------------------------

MeanBasedAdversary::MeanBasedAdversary(std::size_t horizon) : horizon_(horizon) {
  graph_ = std::make_shared<const ManipulationGraph>(make_triangle_star());
  std::vector<BinaryPredictor> members;
  for (FeatureId leaf : {kLeft, kRight}) members.push_back(BinaryPredictor::indicator(3, std::span(&leaf, 1)));
  H_ = std::make_shared<const HypothesisClass>(std::move(members));
  sums_.assign(3, 0);
}

std::optional<Emission> MeanBasedAdversary::emit(const RoundView& view) {
  if (view.t > horizon_) return std::nullopt;
  for (; folded_ < view.past.size(); ++folded_) {
    for (FeatureId x = 0; x < 3; ++x) sums_[x] += view.past[folded_](x);
  }
  last_t_ = view.t;
  const auto half = horizon_ / 2;
  if (view.t <= half) {
    last_case_ = "prefix";
    return Emission{kBase, 1, std::nullopt, std::nullopt};
  }
  if (!target_) target_ = sums_[kLeft] >= sums_[kRight] ? 1 : 0;
  // The target leaf is positive; the other leaf is the bait.
  const FeatureId bait = *target_ == 1 ? kLeft : kRight;
  const FeatureId goal = *target_ == 1 ? kRight : kLeft;
  const auto& h = view.committed;
  if (sums_[kBase] > sums_[bait]) {
    if (h(kBase) == 1) {
      last_case_ = "bait-to-base";
      return Emission{bait, 0, std::nullopt, std::nullopt};
    }
    last_case_ = "goal-to-base";
    return Emission{goal, 1, std::nullopt, std::nullopt};
  }
  if (h(bait) == 0) {
    last_case_ = "base-to-bait";
    return Emission{kBase, 1, std::nullopt, std::nullopt};
  }
  last_case_ = "bait-stays";
  return Emission{bait, 0, std::nullopt, std::nullopt};
}

nlohmann::json MeanBasedAdversary::diagnostics() const {
  const auto half = horizon_ / 2;
  nlohmann::json d{{"case", last_case_}, {"phase", last_t_ <= half ? "prefix" : "exploit"}};
  if (last_t_ > half && last_t_ > 1) {
    d["z"] = static_cast<double>(last_t_ - 1 - half) / static_cast<double>(last_t_ - 1);
  }
  return d;
}

}  // namespace strategem

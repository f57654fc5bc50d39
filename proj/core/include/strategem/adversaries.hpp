#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strategem/bounds.hpp"
#include "strategem/environments.hpp"
#include "strategem/member_set.hpp"

namespace strategem {

// Node addressing for `copies` disjoint copies of make_two_layer(k1, k2)
// (or the clique variant). Leaf index m = (i-1)*k2 + (j-1) within a copy.
struct TwoLayerLayout {
  std::size_t k1 = 1;
  std::size_t k2 = 1;
  std::size_t copies = 1;

  std::size_t per_copy() const { return 1 + k1 + k1 * k2; }
  std::size_t leaves() const { return k1 * k2; }
  FeatureId hub(std::size_t c) const { return static_cast<FeatureId>(c * per_copy()); }
  FeatureId middle(std::size_t c, std::size_t i) const { return static_cast<FeatureId>(c * per_copy() + i); }
  FeatureId leaf(std::size_t c, std::size_t m) const { return static_cast<FeatureId>(c * per_copy() + 1 + k1 + m); }
  std::size_t parent(std::size_t m) const { return 1 + m / k2; }
  std::size_t copy_of(FeatureId x) const { return x / per_copy(); }
  // Index into product_class(make_leaf_singletons(k1, k2), copies).
  std::size_t member_index(const std::vector<std::size_t>& digits) const;
};

// Shared bookkeeping of the two-layer constructions: per-copy survivor sets
// over leaf hypotheses, lazy commitment, and deferred middle nodes.
class TwoLayerAdversary : public Environment {
 public:
  TwoLayerAdversary(TwoLayerLayout layout, bool clique, std::optional<std::size_t> fixed_target);

  const std::shared_ptr<const ManipulationGraph>& graph() const { return graph_; }
  const std::shared_ptr<const HypothesisClass>& hypotheses() const { return H_; }
  const TwoLayerLayout& layout() const { return layout_; }

  std::optional<std::size_t> target() const override;
  FeatureId resolve_x(const RoundRecord& record) const override;
  nlohmann::json diagnostics() const override;
  std::string end_reason() const override { return end_reason_; }
  std::optional<double> certified_lower_bound() const override;
  void observe(const RoundRecord& record) override;

  const MemberSet& survivors(std::size_t c) const { return survivors_[c]; }

 protected:
  std::size_t target_digit(std::size_t c) const;
  bool eliminable(std::size_t c, std::size_t m) const;
  // Middles whose subtree still holds a survivor, ascending.
  std::vector<std::size_t> live_middles(std::size_t c) const;
  // Response shared by every live middle of copy c under `pref` when it is
  // misclassified as negative; nullopt otherwise.
  std::optional<FeatureId> deferred_forcing(const RoundView& view, std::size_t c, std::optional<FeatureId> pref) const;
  bool forces(const RoundView& view, FeatureId x, int y, std::optional<FeatureId> pref) const;
  std::optional<Emission> positive_leaf_case(const RoundView& view, std::size_t c);
  Emission deferred(std::size_t c, std::optional<FeatureId> pref) const;

  TwoLayerLayout layout_;
  std::shared_ptr<const ManipulationGraph> graph_;
  std::shared_ptr<const HypothesisClass> H_;
  std::vector<MemberSet> survivors_;
  std::vector<std::optional<std::size_t>> fixed_;
  std::string last_case_;
  std::string end_reason_ = "horizon";
};

// Arbitrary tie-breaking lower bound on make_two_layer(k1, k2) with d copies.
class RevealedArbAdversary final : public TwoLayerAdversary {
 public:
  RevealedArbAdversary(std::size_t k1, std::size_t k2, std::size_t copies,
                       std::optional<std::size_t> fixed_target = std::nullopt);
  std::string name() const override { return "arb"; }
  std::optional<Emission> emit(const RoundView& view) override;
};

// gamma -> 0 lower bound on make_two_layer_clique(k1, k2) with d copies. Agents
// best respond to the previous classifier.
class GammaZeroAdversary final : public TwoLayerAdversary {
 public:
  GammaZeroAdversary(std::size_t k1, std::size_t k2, std::size_t copies);
  std::string name() const override { return "gamma0"; }
  std::optional<Emission> emit(const RoundView& view) override;

 private:
  std::optional<Emission> try_copy(const RoundView& view, const BinaryPredictor& prev, std::size_t c);
};

// General-gamma lower bound on make_stars(H) with make_star_class(H). Tracks the
// unnormalized discounted sums exactly, forces mistakes while the version
// space shrinks, and once some surviving star shows the gap goal commits to it
// for a terminal window.
class GammaGeneralAdversary final : public Environment {
 public:
  GammaGeneralAdversary(std::size_t stars, Rational gamma);

  std::string name() const override { return "gammaGen"; }
  std::optional<Emission> emit(const RoundView& view) override;
  void observe(const RoundRecord& record) override;
  std::optional<std::size_t> target() const override;
  nlohmann::json diagnostics() const override;
  std::string end_reason() const override { return end_reason_; }
  std::optional<double> certified_lower_bound() const override;

  const std::shared_ptr<const ManipulationGraph>& graph() const { return graph_; }
  const std::shared_ptr<const HypothesisClass>& hypotheses() const { return H_; }
  const Rational& gamma() const { return gamma_; }
  std::size_t window() const { return window_; }
  bool in_terminal_phase() const { return phase_ == Phase::kTerminal; }
  const MemberSet& survivors() const { return survivors_; }

 private:
  enum class Phase { kShrink, kTerminal, kDone };

  void fold(std::span<const BinaryPredictor> past);
  std::optional<Emission> forcing(const RoundView& view, bool allow_elimination);
  std::optional<Emission> terminal(const RoundView& view);
  // Members of the survivor set whose strategic label at x is y.
  MemberSet agreeing(FeatureId x, int y) const;

  std::size_t stars_;
  Rational gamma_;
  std::size_t window_;
  Rational gap_goal_;
  std::shared_ptr<const ManipulationGraph> graph_;
  std::shared_ptr<const HypothesisClass> H_;
  std::vector<Rational> sums_;
  std::size_t folded_ = 0;
  MemberSet survivors_;
  std::vector<MemberSet> labels_[2];  // labels_[y][x] = members with strategic label y at x
  Phase phase_ = Phase::kShrink;
  std::optional<std::size_t> target_;
  std::size_t terminal_rounds_ = 0;
  std::string last_case_;
  bool last_lr_ = true;
  bool gap_entry_ = false;  // terminal phase entered through the gap goal
  std::string end_reason_ = "horizon";
};

// Mean-based agent lower bound on make_triangle_star with H = {1{x_L}, 1{x_R}}.
class MeanBasedAdversary final : public Environment {
 public:
  MeanBasedAdversary(std::size_t horizon);

  std::string name() const override { return "meanbased"; }
  std::optional<Emission> emit(const RoundView& view) override;
  std::optional<std::size_t> target() const override { return target_; }
  nlohmann::json diagnostics() const override;
  std::string end_reason() const override { return "horizon"; }

  const std::shared_ptr<const ManipulationGraph>& graph() const { return graph_; }
  const std::shared_ptr<const HypothesisClass>& hypotheses() const { return H_; }
  std::size_t horizon() const { return horizon_; }

  static constexpr FeatureId kBase = 0;
  static constexpr FeatureId kLeft = 1;
  static constexpr FeatureId kRight = 2;

 private:
  std::size_t horizon_;
  std::shared_ptr<const ManipulationGraph> graph_;
  std::shared_ptr<const HypothesisClass> H_;
  std::vector<long long> sums_;
  std::size_t folded_ = 0;
  std::optional<std::size_t> target_;
  std::string last_case_;
  std::size_t last_t_ = 0;
};

}  // namespace strategem

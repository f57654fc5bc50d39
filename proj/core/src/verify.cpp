#include "strategem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "strategem/adversaries.hpp"
#include "strategem/errors.hpp"

namespace strategem {

namespace {

constexpr double kFloatTolerance = 1e-9;

class Check {
 public:
  explicit Check(std::string name) { r_.name = std::move(name); }

  void skip(std::string why) {
    r_.status = CheckStatus::kSkip;
    r_.detail = std::move(why);
    skipped_ = true;
  }
  void fail(std::size_t t, std::string detail) {
    if (failed_) return;
    failed_ = true;
    r_.first_round = t;
    r_.detail = std::move(detail);
  }
  void fail_global(std::string detail) {
    if (failed_) return;
    failed_ = true;
    r_.detail = std::move(detail);
  }
  void note(std::string detail) {
    if (!failed_) r_.detail = std::move(detail);
  }
  InvariantResult done() {
    if (!skipped_) r_.status = failed_ ? CheckStatus::kFail : CheckStatus::kPass;
    return r_;
  }

 private:
  InvariantResult r_;
  bool failed_ = false;
  bool skipped_ = false;
};

struct Alg1Event {
  std::size_t t = 0;
  FeatureId v = 0;
  int y = 0;
  WeightedExpertLearner::Update update;
  std::map<MemberSet, Rational> before;
  std::map<MemberSet, Rational> after;
};

const WeightedExpertLearner* find_alg1(const Learner& l) {
  if (auto p = dynamic_cast<const WeightedExpertLearner*>(&l)) return p;
  if (auto d = dynamic_cast<const DelayedReductionLearner*>(&l)) {
    return dynamic_cast<const WeightedExpertLearner*>(&d->inner());
  }
  return nullptr;
}

class Recorder final : public GameObserver {
 public:
  explicit Recorder(const Learner& learner)
      : alg1_(find_alg1(learner)), delayed_(dynamic_cast<const DelayedReductionLearner*>(&learner)) {}

  void before_update(const RoundContext& ctx) override {
    if (alg1_ && ctx.mistake) before_ = alg1_->experts();
  }
  void after_update(const RoundContext& ctx) override {
    if (!alg1_ || !ctx.mistake) return;
    if (delayed_ && !delayed_->updated_last_round()) return;
    Alg1Event e;
    e.t = ctx.t;
    e.v = ctx.v;
    e.y = ctx.emission.y;
    e.update = *alg1_->last_update();
    e.before = std::move(before_);
    e.after = alg1_->experts();
    events.push_back(std::move(e));
  }

  std::vector<Alg1Event> events;

 private:
  const WeightedExpertLearner* alg1_;
  const DelayedReductionLearner* delayed_;
  std::map<MemberSet, Rational> before_;
};

bool revealed(const AgentModel& a) {
  return dynamic_cast<const RevealedStdAgent*>(&a) || dynamic_cast<const RevealedArbAgent*>(&a);
}
bool gamma_style(const AgentModel& a) {
  return dynamic_cast<const GammaWeightedAgent<double>*>(&a) ||
         dynamic_cast<const GammaWeightedAgent<Rational>*>(&a) || dynamic_cast<const PreviousClassifierAgent*>(&a);
}
bool mean_based(const AgentModel& a) { return dynamic_cast<const MeanBasedAgent*>(&a) != nullptr; }

BinaryPredictor row_h(const TranscriptRow& r) { return BinaryPredictor::from_string(r.diag.at("h").get<std::string>()); }

Rational member_weight(const std::map<MemberSet, Rational>& m, const MemberSet& s) {
  auto it = m.find(s);
  return it == m.end() ? Rational(0) : it->second;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::none_of(results.begin(), results.end(), [](const auto& r) { return r.status == CheckStatus::kFail; });
}

const InvariantResult* VerifyReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void VerifyReport::print(std::ostream& out) const {
  out << "game: " << transcript.rows.size() << " rounds, " << transcript.total_mistakes << " mistakes, ended by "
      << transcript.end_reason << '\n';
  for (const auto& r : results) {
    switch (r.status) {
      case CheckStatus::kPass: out << "PASS " << r.name; break;
      case CheckStatus::kFail: out << "FAIL " << r.name; break;
      case CheckStatus::kSkip: out << "SKIP " << r.name; break;
    }
    if (r.first_round) out << " (first violation at round " << *r.first_round << ")";
    if (!r.detail.empty()) out << ": " << r.detail;
    out << '\n';
  }
}

VerifyReport verify_game(GameSetup& setup) {
  Recorder recorder(*setup.learner);
  VerifyReport report;
  report.transcript = play(setup, &recorder);
  const auto& tr = report.transcript;
  const auto& rows = tr.rows;
  const auto& g = *setup.graph;
  const auto& H = *setup.H;
  const auto& agent = *setup.agent;
  const auto& learner = *setup.learner;
  auto& results = report.results;

  std::vector<BinaryPredictor> hs;
  hs.reserve(rows.size());
  for (const auto& r : rows) hs.push_back(row_h(r));

  // Accounting.
  {
    Check c("transcript-accounting");
    std::size_t cum = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      const bool mistake = hs[k](r.v) != r.y;
      if (r.t != k + 1) c.fail(r.t, "round numbers are not consecutive");
      if (r.prediction != hs[k](r.v)) c.fail(r.t, "pred differs from h_t(v_t)");
      if (r.mistake != mistake) c.fail(r.t, "mistake flag differs from h_t(v_t) != y_t");
      cum += mistake ? 1 : 0;
      if (r.cumulative != cum) c.fail(r.t, "cumulative count differs from recount");
    }
    if (cum != tr.total_mistakes) c.fail_global("total " + std::to_string(tr.total_mistakes) + " != recount " + std::to_string(cum));
    results.push_back(c.done());
  }

  // Realizability of the emitted stream.
  {
    Check c("stream-realizable");
    std::vector<AgentExample> seq;
    for (const auto& r : rows) seq.push_back({r.x, r.y});
    if (tr.target) {
      const auto& h_star = H[*tr.target];
      for (const auto& r : rows) {
        if (strategic_label(h_star, g, r.x) != r.y) {
          c.fail(r.t, "y_t disagrees with the final target " + std::to_string(*tr.target));
        }
      }
      c.note("target " + std::to_string(*tr.target));
    } else if (check_realizable(seq, H, g).empty()) {
      c.fail_global("no class member realizes the stream");
    }
    results.push_back(c.done());
  }

  // Agent responses.
  {
    Check c("response-validity");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      if (!g.has_edge(r.x, r.v)) {
        c.fail(r.t, "v_t is not an out-neighbour of x_t");
        continue;
      }
      if (revealed(agent)) {
        const auto br = best_response_set(hs[k], g, r.x);
        if (!std::binary_search(br.begin(), br.end(), r.v)) c.fail(r.t, "revealed agent left BR_{h_t}(x_t)");
      }
      if (dynamic_cast<const RevealedStdAgent*>(&agent) && respond_standard(hs[k], g, r.x) != r.v) {
        c.fail(r.t, "standard tie-breaking violated");
      }
    }
    results.push_back(c.done());
  }

  // Learner assumptions.
  {
    Check c("learner-completed");
    if (tr.learner_error) {
      if (revealed(agent)) {
        c.fail(rows.size(), *tr.learner_error);
      } else {
        c.note("learner stopped at round " + std::to_string(rows.size()) + ": " + *tr.learner_error);
      }
    }
    results.push_back(c.done());
  }

  // Oracle.
  {
    Check c("oracle-zero-mistakes");
    const auto* o = dynamic_cast<const OracleLearner*>(&learner);
    if (!o) {
      c.skip("learner is not the oracle");
    } else if (!tr.target || hs.empty() || hs.front() != H[*tr.target]) {
      c.skip("oracle hypothesis is not the target");
    } else if (mean_based(agent)) {
      c.skip("mean-based agents may leave the best response");
    } else {
      for (const auto& r : rows) {
        if (r.mistake) c.fail(r.t, "oracle misclassified v_t");
      }
    }
    results.push_back(c.done());
  }

  // Weighted experts.
  const auto* alg1 = find_alg1(learner);
  const bool direct_alg1 = dynamic_cast<const WeightedExpertLearner*>(&learner) != nullptr;
  {
    Check decay("alg1-weight-decay");
    Check champion("alg1-champion-floor");
    if (!alg1) {
      decay.skip("learner does not run alg1");
      champion.skip("learner does not run alg1");
    } else {
      const auto factor = weight_decay_factor(alg1->degrees());
      const auto floor = champion_factor(alg1->degrees());
      for (const auto& e : recorder.events) {
        if (!(e.update.weight_after <= factor * e.update.weight_before)) {
          decay.fail(e.t, "W_after/W_before = " + fmt(to_double(e.update.weight_after / e.update.weight_before)) +
                              " > " + fmt(to_double(factor)));
        }
      }
      if (!tr.target) {
        champion.skip("no target to track");
      } else {
        const auto& h_star = H[*tr.target];
        const auto& oracle = alg1->oracle();
        MemberSet champ = oracle.full();
        std::size_t champ_updates = 0;
        for (const auto& e : recorder.events) {
          const auto x = rows[e.t - 1].x;
          const auto w_before = member_weight(e.before, champ);
          const auto& pred = alg1->expert_prediction(champ);
          MemberSet next = champ;
          if (e.update.kind == MistakeKind::kFalsePositive) {
            if (pred(e.v) != 0) next = oracle.restrict(champ, e.v, 0);
          } else {
            const auto& V = e.update.candidates_v;
            const auto& X = e.update.candidates_x;
            if (!std::binary_search(X.begin(), X.end(), x) && std::find(X.begin(), X.end(), x) == X.end()) {
              champion.fail(e.t, "x_t not among the candidate original features");
              break;
            }
            const bool silent = std::all_of(V.begin(), V.end(), [&](FeatureId z) { return pred(z) == 0; });
            if (silent) {
              std::optional<FeatureId> v_star;
              for (auto z : best_response_set(h_star, g, x)) {
                if (h_star(z) == 1 && std::find(V.begin(), V.end(), z) != V.end()) {
                  v_star = z;
                  break;
                }
              }
              if (!v_star) {
                champion.fail(e.t, "no positive best response of the target among V~");
                break;
              }
              next = oracle.restrict(champ, *v_star, 1);
            }
          }
          if (next != champ) ++champ_updates;
          if (next.empty() || !next.contains(*tr.target)) {
            champion.fail(e.t, "champion version space lost the target");
            break;
          }
          const auto w_after = member_weight(e.after, next);
          if (!(w_after >= floor * w_before)) {
            champion.fail(e.t, "champion weight fell below 1/(2(k_out+1)(k_in+1)) of its previous value");
          }
          champ = next;
        }
        const int ld = oracle.ldim(oracle.full());
        if (champ_updates > static_cast<std::size_t>(std::max(ld, 0))) {
          champion.fail_global("champion updated " + std::to_string(champ_updates) + " times, more than Ldim " +
                               std::to_string(ld));
        }
      }
    }
    results.push_back(decay.done());
    results.push_back(champion.done());
  }
  {
    Check c("alg1-mistake-bound");
    if (!direct_alg1) {
      c.skip("learner is not alg1");
    } else if (!revealed(agent)) {
      c.skip("bound holds for revealed-classifier agents");
    } else {
      const auto bound = weighted_expert_bound(alg1->degrees(), ldim(H));
      if (static_cast<double>(tr.total_mistakes) > bound) {
        c.fail_global(std::to_string(tr.total_mistakes) + " mistakes > bound " + fmt(bound));
      }
      c.note(std::to_string(tr.total_mistakes) + " <= " + fmt(bound));
    }
    results.push_back(c.done());
  }

  // Conservative union.
  {
    Check order("alg2-fn-follows-fp");
    Check bound("alg2-mistake-bound");
    const auto* alg2 = dynamic_cast<const ConservativeUnionLearner*>(&learner);
    if (!alg2) {
      order.skip("learner is not alg2");
      bound.skip("learner is not alg2");
    } else if (mean_based(agent)) {
      order.skip("mean-based agents");
      bound.skip("mean-based agents");
    } else {
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        const bool fn = r.mistake && r.y == 1;
        if (!fn) continue;
        const bool prev_fp = k > 0 && rows[k - 1].mistake && rows[k - 1].y == 0;
        if (!prev_fp) order.fail(r.t, "false negative not preceded by a false positive");
      }
      if (tr.total_mistakes > 2 * H.size()) {
        bound.fail_global(std::to_string(tr.total_mistakes) + " mistakes > 2|H| = " + std::to_string(2 * H.size()));
      }
      bound.note(std::to_string(tr.total_mistakes) + " <= " + std::to_string(2 * H.size()));
    }
    results.push_back(order.done());
    results.push_back(bound.done());
  }

  // Delayed reduction.
  {
    Check run("alg3-constant-run");
    Check eps("alg3-epsilon");
    Check br("alg3-best-response");
    Check bound("alg3-mistake-bound");
    const auto* alg3 = dynamic_cast<const DelayedReductionLearner*>(&learner);
    if (!alg3) {
      for (auto* c : {&run, &eps, &br, &bound}) c->skip("learner is not alg3");
    } else {
      const auto phi = alg3->phi_threshold();
      const auto* gd = dynamic_cast<const GammaWeightedAgent<double>*>(&agent);
      const auto* gr = dynamic_cast<const GammaWeightedAgent<Rational>*>(&agent);
      std::optional<double> gamma;
      if (gd) gamma = gd->estimator().gamma();
      if (gr) gamma = to_double(gr->estimator().gamma());
      if (!gamma) eps.skip("agent has no discount factor");
      if (!gamma_style(agent) && !revealed(agent)) br.skip("agent is not gamma-weighted");
      double max_eps = 0.0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        const auto& d = r.diag.at("learner");
        if (!d.value("updated", false)) continue;
        const auto len = d.at("run").get<std::size_t>();
        if (len < phi) run.fail(r.t, "inner update after a run of " + std::to_string(len) + " < Phi");
        if (gamma && r.t >= 2) {
          const double e = delayed_epsilon(*gamma, len, r.t);
          max_eps = std::max(max_eps, e);
          if (e > 1.0 / 3.0 + kFloatTolerance) eps.fail(r.t, "eps_t = " + fmt(e) + " > 1/3");
        }
        if (gamma_style(agent) || revealed(agent)) {
          if (strategic_label(hs[k], g, r.x) == 1 && hs[k](r.v) != 1) {
            br.fail(r.t, "agent response outside BR_{h_t}(x_t)");
          }
        }
      }
      if (gamma) eps.note("max eps_t = " + fmt(max_eps));
      if (setup.inner_learner == "alg1") {
        const double b = static_cast<double>(phi) * weighted_expert_bound(g.max_degrees(), ldim(H));
        if (static_cast<double>(tr.total_mistakes) > b) {
          bound.fail_global(std::to_string(tr.total_mistakes) + " mistakes > Phi * alg1 bound = " + fmt(b));
        }
        bound.note(std::to_string(tr.total_mistakes) + " <= " + fmt(b));
      } else if (setup.inner_learner == "alg2") {
        const auto b = phi * 2 * H.size();
        if (tr.total_mistakes > b) {
          bound.fail_global(std::to_string(tr.total_mistakes) + " mistakes > Phi * 2|H| = " + std::to_string(b));
        }
      } else {
        bound.skip("no strategic bound for inner learner " + setup.inner_learner);
      }
    }
    results.push_back(run.done());
    results.push_back(eps.done());
    results.push_back(br.done());
    results.push_back(bound.done());
  }

  // Discounted estimator.
  {
    Check c("estimator-recurrence");
    const auto n = g.node_count();
    const auto* gd = dynamic_cast<const GammaWeightedAgent<double>*>(&agent);
    const auto* gr = dynamic_cast<const GammaWeightedAgent<Rational>*>(&agent);
    if (gr) {
      const auto& est = gr->estimator();
      std::vector<Rational> direct(n, Rational(0));
      Rational pw(1);
      for (std::size_t k = hs.size(); k-- > 0;) {
        for (std::size_t x = 0; x < n; ++x) {
          if (hs[k](static_cast<FeatureId>(x))) direct[x] += pw;
        }
        pw *= est.gamma();
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (est.sums()[x] != direct[x]) c.fail_global("exact estimator differs from the direct sum at node " + std::to_string(x));
      }
    } else if (gd) {
      const auto& est = gd->estimator();
      const auto view = est.normalized();
      const double gamma = est.gamma();
      const auto m = hs.size();
      double dev = 0.0;
      if (m > 0) {
        const double scale = (1.0 - gamma) / (1.0 - std::pow(gamma, static_cast<double>(m)));
        for (std::size_t x = 0; x < n; ++x) {
          double s = 0.0;
          for (std::size_t k = 0; k < m; ++k) {
            if (hs[k](static_cast<FeatureId>(x))) s += std::pow(gamma, static_cast<double>(m - 1 - k));
          }
          dev = std::max(dev, std::abs(s * scale - view(static_cast<FeatureId>(x))));
        }
      }
      if (dev > kFloatTolerance) c.fail_global("max deviation " + fmt(dev));
      c.note("max deviation " + fmt(dev));
    } else {
      c.skip("agent has no discounted estimator");
    }
    results.push_back(c.done());
  }

  // Mean-based agents.
  {
    Check sum("mean-based-distribution");
    Check eta("mean-based-eta");
    Check prob("mean-based-mistake-probability");
    const auto* mb = dynamic_cast<const MeanBasedAgent*>(&agent);
    if (!mb) {
      for (auto* c : {&sum, &eta, &prob}) c->skip("agent is not mean-based");
    } else {
      const auto& st = mb->state();
      const bool adversarial = dynamic_cast<const MeanBasedAdversary*>(setup.environment.get()) != nullptr;
      if (!adversarial) prob.skip("environment is not the mean-based adversary");
      const auto half = setup.horizon / 2;
      std::vector<double> totals(g.node_count(), 0.0);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        const auto out = g.out_neighbors(r.x);
        const auto& dist = r.diag.at("agent").at("dist");
        std::vector<double> p;
        double total = 0.0;
        for (auto u : out) {
          p.push_back(dist.at(std::to_string(u)).get<double>());
          total += p.back();
        }
        if (std::abs(total - 1.0) > kFloatTolerance) sum.fail(r.t, "probabilities sum to " + fmt(total));
        if (r.t >= 2) {
          const double e = learning_rate(st, r.t);
          const double rate = e * static_cast<double>(r.t - 1);
          const double bound_eta =
              st.algorithm == MeanBasedAlgorithm::kMultiplicativeWeights ? mw_mean_based_eta(rate) : e;
          double best = -1.0;
          for (auto u : out) best = std::max(best, totals[u] / static_cast<double>(r.t - 1));
          for (std::size_t q = 0; q < out.size(); ++q) {
            const double avg = totals[out[q]] / static_cast<double>(r.t - 1);
            if (avg < best - bound_eta && p[q] > bound_eta + kFloatTolerance) {
              eta.fail(r.t, "action " + std::to_string(out[q]) + " is eta-worse but has probability " + fmt(p[q]));
            }
          }
          if (adversarial && r.t > half && r.t > 1) {
            const double z = static_cast<double>(r.t - 1 - half) / static_cast<double>(r.t - 1);
            const double k_out = static_cast<double>(out.size());
            const double sigma = st.algorithm == MeanBasedAlgorithm::kMultiplicativeWeights
                                     ? std::exp(-rate * z) / k_out
                                     : e / k_out;
            const double c_t = *std::max_element(p.begin(), p.end());
            double pm = 0.0;
            for (std::size_t q = 0; q < out.size(); ++q) {
              if (hs[k](out[q]) != r.y) pm += p[q];
            }
            if (pm < std::min(sigma, c_t) - kFloatTolerance) {
              prob.fail(r.t, "P(mistake) = " + fmt(pm) + " < min(sigma, c) = " + fmt(std::min(sigma, c_t)));
            }
          }
        }
        for (std::size_t x = 0; x < g.node_count(); ++x) totals[x] += hs[k](static_cast<FeatureId>(x));
      }
    }
    results.push_back(sum.done());
    results.push_back(eta.done());
    results.push_back(prob.done());
  }

  // General-gamma construction.
  {
    Check c("gammaGen-left-above-right");
    const auto* gg = dynamic_cast<const GammaGeneralAdversary*>(setup.environment.get());
    if (!gg) {
      c.skip("environment is not gammaGen");
    } else {
      const auto n = g.node_count();
      std::vector<Rational> sums(n, Rational(0));
      std::size_t window_rounds = 0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& env = rows[k].diag.at("env");
        if (env.value("phase", "") == "terminal" && env.value("entry", "") == "gap") {
          const auto i = env.at("target_star").get<std::size_t>();
          ++window_rounds;
          if (!(sums[3 * i + 1] > sums[3 * i + 2])) c.fail(rows[k].t, "estimate of x_L not above x_R");
        }
        for (std::size_t x = 0; x < n; ++x) sums[x] = gg->gamma() * sums[x] + hs[k](static_cast<FeatureId>(x));
      }
      c.note(std::to_string(window_rounds) + " window rounds");
    }
    results.push_back(c.done());
  }

  // Certified lower bounds.
  {
    Check c("adversary-lower-bound");
    const auto bound = setup.environment->certified_lower_bound();
    const bool oracle_on_target = setup.learner_name == "oracle" && tr.target && !hs.empty() &&
                                  hs.front() == H[*tr.target];
    if (!bound) {
      c.skip("environment certifies no lower bound");
    } else if (oracle_on_target) {
      c.skip("oracle learner commits the target");
    } else if (tr.learner_error) {
      c.skip("game cut short by the learner");
    } else {
      if (static_cast<double>(tr.total_mistakes) < *bound) {
        c.fail_global(std::to_string(tr.total_mistakes) + " mistakes < certified " + fmt(*bound));
      }
      c.note(std::to_string(tr.total_mistakes) + " >= " + fmt(*bound));
    }
    results.push_back(c.done());
  }
  return report;
}

VerifyReport verify(const GameConfig& config) {
  auto setup = build_game(config);
  return verify_game(setup);
}

}  // namespace strategem

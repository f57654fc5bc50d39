#include "strategem/predictors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace strategem {

BinaryPredictor::BinaryPredictor(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
  for (auto& v : labels_) v = v != 0 ? 1 : 0;
}

BinaryPredictor BinaryPredictor::indicator(std::size_t n, std::span<const FeatureId> positives) {
  std::vector<std::uint8_t> labels(n, 0);
  for (auto x : positives) labels.at(x) = 1;
  return BinaryPredictor(std::move(labels));
}

BinaryPredictor BinaryPredictor::from_string(std::string_view bits) {
  std::vector<std::uint8_t> labels;
  labels.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("predictor string must contain only '0' and '1', got '" + std::string(bits) +
                                  "'");
    }
    labels.push_back(c == '1' ? 1 : 0);
  }
  return BinaryPredictor(std::move(labels));
}

bool BinaryPredictor::all_zero() const {
  return std::none_of(labels_.begin(), labels_.end(), [](auto v) { return v != 0; });
}

std::string BinaryPredictor::to_string() const {
  std::string s(labels_.size(), '0');
  for (std::size_t i = 0; i < labels_.size(); ++i) s[i] = labels_[i] != 0 ? '1' : '0';
  return s;
}

HypothesisClass::HypothesisClass(std::vector<BinaryPredictor> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("hypothesis class must be nonempty");
  const auto n = members_.front().size();
  std::set<BinaryPredictor> seen;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].size() != n) {
      throw std::invalid_argument("hypothesis " + std::to_string(i) + " has length " +
                                  std::to_string(members_[i].size()) + ", expected " + std::to_string(n));
    }
    if (!seen.insert(members_[i]).second) {
      throw std::invalid_argument("duplicate hypothesis " + members_[i].to_string() + " at index " +
                                  std::to_string(i));
    }
  }
}

std::optional<std::size_t> HypothesisClass::index_of(const BinaryPredictor& h) const {
  auto it = std::find(members_.begin(), members_.end(), h);
  if (it == members_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

namespace {

template <typename Value, typename Greater, typename Equal>
std::vector<FeatureId> argmax_over(const ManipulationGraph& g, FeatureId x, Value value, Greater greater,
                                   Equal tied) {
  const auto out = g.out_neighbors(x);
  auto best = value(out.front());
  for (auto v : out) {
    if (greater(value(v), best)) best = value(v);
  }
  std::vector<FeatureId> result;
  for (auto v : out) {
    if (tied(value(v), best)) result.push_back(v);
  }
  return result;
}

}  // namespace

std::vector<FeatureId> best_response_set(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x) {
  return argmax_over(
      g, x, [&](FeatureId v) { return h(v); }, std::greater<>{}, std::equal_to<>{});
}

std::vector<FeatureId> best_response_set(std::span<const double> values, const ManipulationGraph& g, FeatureId x,
                                         double scale) {
  return argmax_over(
      g, x, [&](FeatureId v) { return values[v] * scale; }, std::greater<>{},
      [](double a, double best) { return a >= best - kTieTolerance; });
}

std::vector<FeatureId> best_response_set(std::span<const Rational> values, const ManipulationGraph& g, FeatureId x) {
  const auto out = g.out_neighbors(x);
  const Rational* best = &values[out.front()];
  for (auto v : out) {
    if (values[v] > *best) best = &values[v];
  }
  std::vector<FeatureId> result;
  for (auto v : out) {
    if (values[v] == *best) result.push_back(v);
  }
  return result;
}

std::vector<FeatureId> best_response_set(const FractionalPredictor<double>& h, const ManipulationGraph& g,
                                         FeatureId x) {
  return best_response_set(std::span<const double>(h.values), g, x);
}

std::vector<FeatureId> best_response_set(const FractionalPredictor<Rational>& h, const ManipulationGraph& g,
                                         FeatureId x) {
  return best_response_set(std::span<const Rational>(h.values), g, x);
}

int strategic_label(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x) {
  for (auto v : g.out_neighbors(x)) {
    if (h(v) != 0) return 1;
  }
  return 0;
}

std::vector<std::size_t> check_realizable(std::span<const AgentExample> seq, const HypothesisClass& H,
                                          const ManipulationGraph& g) {
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const bool ok = std::all_of(seq.begin(), seq.end(),
                                [&](const AgentExample& e) { return strategic_label(H[i], g, e.x) == e.y; });
    if (ok) result.push_back(i);
  }
  return result;
}

HypothesisClass make_star_class(std::size_t count) {
  if (count == 0) throw std::invalid_argument("star class needs at least one star");
  std::vector<BinaryPredictor> members;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::uint8_t> labels(3 * count, 0);
    for (std::size_t j = 0; j < count; ++j) labels[3 * j + (j == i ? 2 : 1)] = 1;
    members.emplace_back(std::move(labels));
  }
  return HypothesisClass(std::move(members));
}

HypothesisClass make_leaf_singletons(std::size_t k1, std::size_t k2) {
  if (k1 == 0 || k2 == 0) throw std::invalid_argument("leaf singletons need k1 >= 1 and k2 >= 1");
  const std::size_t n = 1 + k1 + k1 * k2;
  std::vector<BinaryPredictor> members;
  for (std::size_t leaf = 1 + k1; leaf < n; ++leaf) {
    const FeatureId x = static_cast<FeatureId>(leaf);
    members.push_back(BinaryPredictor::indicator(n, std::span<const FeatureId>(&x, 1)));
  }
  return HypothesisClass(std::move(members));
}

HypothesisClass product_class(const HypothesisClass& per_copy, std::size_t copies) {
  if (copies == 0) throw std::invalid_argument("product class needs at least one copy");
  if (copies == 1) return per_copy;
  const auto n = per_copy.node_count();
  const auto m = per_copy.size();
  std::size_t total = 1;
  for (std::size_t c = 0; c < copies; ++c) {
    if (total > (std::size_t{1} << 20) / m) throw std::invalid_argument("product class too large");
    total *= m;
  }
  std::vector<BinaryPredictor> members;
  members.reserve(total);
  std::vector<std::size_t> digits(copies, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<std::uint8_t> labels(n * copies, 0);
    for (std::size_t c = 0; c < copies; ++c) {
      const auto& h = per_copy[digits[c]];
      for (std::size_t x = 0; x < n; ++x) labels[c * n + x] = static_cast<std::uint8_t>(h(static_cast<FeatureId>(x)));
    }
    members.emplace_back(std::move(labels));
    for (std::size_t c = copies; c-- > 0;) {
      if (++digits[c] < m) break;
      digits[c] = 0;
    }
  }
  return HypothesisClass(std::move(members));
}

HypothesisClass read_class(std::istream& in) {
  std::vector<BinaryPredictor> members;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      members.push_back(BinaryPredictor::from_string(std::string_view(line).substr(first, last - first + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  return HypothesisClass(std::move(members));
}

HypothesisClass read_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open class file '" + path + "'");
  return read_class(in);
}

void write_class(std::ostream& out, const HypothesisClass& H) {
  for (const auto& h : H) out << h.to_string() << '\n';
}

}  // namespace strategem

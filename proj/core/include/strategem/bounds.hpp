#pragma once

#include <cstddef>

#include "strategem/graph.hpp"
#include "strategem/rational.hpp"

namespace strategem {

// Smallest k >= 1 with gamma^k <= c, i.e. ceil(ln c / ln gamma) for c in (0, 1).
// Evaluated exactly, so boundary cases do not depend on floating-point logs.
std::size_t ceil_log_ratio(const Rational& gamma, const Rational& c);

// Update frequency of the delayed reduction: ceil(ln(1/3)/ln(gamma)) + 1.
std::size_t phi_threshold(const Rational& gamma);
// The gamma -> 0 limit of phi_threshold.
inline constexpr std::size_t kPhiThresholdGammaZero = 2;

// Weighted-expert reduction with SOA experts:
// 4(k_out+1)(k_in+1) * ln(2(k_out+1)(k_in+1)) * ldim, degrees with self-loops.
double weighted_expert_bound(const Degrees& d, int ldim);

// Per-mistake multiplicative decay of the total expert weight:
// 1 - 1/(4(k_out+1)(k_in+1)).
Rational weight_decay_factor(const Degrees& d);
// Weight a correctly-fed expert keeps per mistake: 1/(2(k_out+1)(k_in+1)).
Rational champion_factor(const Degrees& d);

// eps_t = (gamma^(Phi-1) - gamma^(t-1)) / (1 - gamma^(t-1)) for t >= 2.
double delayed_epsilon(double gamma, std::size_t phi, std::size_t t);

// Discounted-agent star construction: length of the terminal window
// ceil(ln(4/3)/ln(1/gamma)), the certified count
// min(ceil(ln(4/3)/(2 ln(1/gamma))), classes - 1), and the gap goal 1/(3(1-gamma)).
std::size_t terminal_window(const Rational& gamma);
std::size_t gamma_general_lower_bound(const Rational& gamma, std::size_t class_size);
Rational gap_goal(const Rational& gamma);

// Two-layer constructions: (k1*k2 - 1) per copy.
std::size_t two_layer_lower_bound(std::size_t k1, std::size_t k2, std::size_t copies);

}  // namespace strategem

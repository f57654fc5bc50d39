#include "strategem/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strategem {

std::size_t ceil_log_ratio(const Rational& gamma, const Rational& c) {
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(c > 0 && c < 1)) throw std::invalid_argument("ratio target must lie in (0, 1)");
  // gamma^k shrinks geometrically; compare against c with a float pre-estimate
  // to skip most of the exact powers.
  const double estimate = std::log(to_double(c)) / std::log(to_double(gamma));
  std::size_t k = estimate > 2.0 ? static_cast<std::size_t>(estimate) - 1 : 1;
  while (k > 1 && power(gamma, k - 1) <= c) --k;
  while (power(gamma, k) > c) ++k;
  return k;
}

std::size_t phi_threshold(const Rational& gamma) { return ceil_log_ratio(gamma, Rational(1, 3)) + 1; }

double weighted_expert_bound(const Degrees& d, int ldim) {
  const double k = static_cast<double>((d.k_out + 1) * (d.k_in + 1));
  return 4.0 * k * std::log(2.0 * k) * static_cast<double>(std::max(ldim, 0));
}

Rational weight_decay_factor(const Degrees& d) {
  return Rational(1) - Rational(1, 4 * (d.k_out + 1) * (d.k_in + 1));
}

Rational champion_factor(const Degrees& d) { return Rational(1, 2 * (d.k_out + 1) * (d.k_in + 1)); }

double delayed_epsilon(double gamma, std::size_t phi, std::size_t t) {
  if (t < 2) return 0.0;
  const double gt = std::pow(gamma, static_cast<double>(t - 1));
  return (std::pow(gamma, static_cast<double>(phi) - 1.0) - gt) / (1.0 - gt);
}

std::size_t terminal_window(const Rational& gamma) { return ceil_log_ratio(gamma, Rational(3, 4)); }

std::size_t gamma_general_lower_bound(const Rational& gamma, std::size_t class_size) {
  // ceil(x/2) with x = ln(4/3)/ln(1/gamma): smallest k with gamma^(2k) <= 3/4.
  const std::size_t half = ceil_log_ratio(gamma * gamma, Rational(3, 4));
  return std::min(half, class_size == 0 ? 0 : class_size - 1);
}

Rational gap_goal(const Rational& gamma) { return Rational(1) / (Rational(3) * (Rational(1) - gamma)); }

std::size_t two_layer_lower_bound(std::size_t k1, std::size_t k2, std::size_t copies) {
  return (k1 * k2 - 1) * copies;
}

}  // namespace strategem

#include "lorp/maxsum_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "lorp/errors.hpp"

namespace lorp::maxsum {

std::vector<double> binary_factor_messages_bruteforce(const BinaryFactor& f, std::size_t n,
                                                      std::span<const double> incoming) {
  if (n > kBruteforceLimit) {
    throw precondition_error("bruteforce oracle refuses n = " + std::to_string(n) +
                             " (limit " + std::to_string(kBruteforceLimit) + ")");
  }
  if (incoming.size() != n) {
    throw precondition_error("bruteforce oracle: incoming size mismatch");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> out(n);
  const std::uint32_t total = std::uint32_t{1} << n;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint32_t bit = std::uint32_t{1} << j;
    double mu0 = inf;
    double mu1 = inf;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      double value = f(mask);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j && (mask >> k & 1U)) {
          value += incoming[k];
        }
      }
      if (mask & bit) {
        mu1 = std::min(mu1, value);
      } else {
        mu0 = std::min(mu0, value);
      }
    }
    out[j] = mu1 - mu0;
  }
  return out;
}

std::vector<double> workload_messages_bruteforce(const PlaneFactorInputs& inputs) {
  inputs.validate();
  const std::size_t n = inputs.deltas.size();
  const auto& params = inputs.params;
  const auto& deltas = inputs.deltas;
  const BinaryFactor h = [&](std::uint32_t mask) {
    double value = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask >> k & 1U) {
        value += deltas[k];
      }
    }
    const auto eta = static_cast<double>(std::popcount(mask));
    return value + (eta == 0.0 ? 0.0 : params.k * std::exp(params.alpha * std::log(eta)));
  };
  return binary_factor_messages_bruteforce(h, n, inputs.incoming);
}

}  // namespace lorp::maxsum

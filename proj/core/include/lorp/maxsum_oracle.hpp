#pragma once

// Exhaustive-enumeration message oracles. Exponential in the variable count;
// used to check the fast message computations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lorp/maxsum.hpp"

namespace lorp::maxsum {

inline constexpr std::size_t kBruteforceLimit = 20;

/// Factor over n binary variables; bit j of the mask is variable j.
using BinaryFactor = std::function<double(std::uint32_t mask)>;

/// nu_j = min over other variables of f + sum_{k != j} incoming_k z_k, taken
/// at z_j = 1 minus at z_j = 0. Throws precondition_error past kBruteforceLimit.
std::vector<double> binary_factor_messages_bruteforce(const BinaryFactor& f, std::size_t n,
                                                      std::span<const double> incoming);

std::vector<double> workload_messages_bruteforce(const PlaneFactorInputs& inputs);

}  // namespace lorp::maxsum

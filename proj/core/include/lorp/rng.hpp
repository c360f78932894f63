#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lorp {

/// One round of the splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed combination, order sensitive.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Independent named substream of `seed`. Streams with different names do not
/// share draws, so adding draws to one leaves the others untouched.
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name);

}  // namespace lorp

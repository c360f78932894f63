#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lorp/errors.hpp"
#include "lorp/maxsum.hpp"
#include "lorp/maxsum_oracle.hpp"

using namespace lorp;
using namespace lorp::maxsum;

namespace {

SelectionInputs sel(std::initializer_list<std::pair<std::uint32_t, double>> in) {
  SelectionInputs s;
  for (const auto& [p, v] : in) {
    s.incoming.emplace_back(PlaneId{p}, v);
  }
  return s;
}

// Written out independently of the library: enumerate all assignments of the
// other variables for z_j = 1 and z_j = 0.
std::vector<double> naive_workload(const std::vector<double>& deltas,
                                   const std::vector<double>& incoming, double k, double alpha) {
  const std::size_t n = deltas.size();
  const auto w = [&](int eta) { return eta == 0 ? 0.0 : k * std::exp(alpha * std::log(eta)); };
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double best[2] = {std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      double v = 0.0;
      int eta = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          ++eta;
          v += deltas[i];
          if (i != j) {
            v += incoming[i];
          }
        }
      }
      v += w(eta);
      auto& slot = best[mask >> j & 1U];
      slot = std::min(slot, v);
    }
    out[j] = best[1] - best[0];
  }
  return out;
}

PlaneFactorInputs random_inputs(std::mt19937_64& rng, std::size_t n) {
  static const double ks[] = {0, 1, 10, 1000};
  static const double alphas[] = {1, 1.25, 1.36, 2};
  std::uniform_real_distribution<double> d(0, 1e4);
  std::uniform_real_distribution<double> nu(-1e3, 1e3);
  std::uniform_int_distribution<int> pick(0, 3);
  PlaneFactorInputs in;
  in.params.k = ks[pick(rng)];
  in.params.alpha = alphas[pick(rng)];
  for (std::size_t i = 0; i < n; ++i) {
    in.deltas.push_back(d(rng));
    in.incoming.push_back(nu(rng));
  }
  return in;
}

}  // namespace

TEST(CostToSelection, PassesDistanceThrough) {
  EXPECT_EQ(cost_to_selection(7.0), 7.0);
  EXPECT_EQ(cost_to_selection(0.0), 0.0);
  EXPECT_EQ(cost_to_selection(5.0), 5.0);
  EXPECT_THROW(cost_to_selection(-1.0), precondition_error);
}

TEST(SelectionToCosts, Examples) {
  EXPECT_EQ(selection_to_costs(sel({{1, 5}, {2, 2}})), (std::vector<double>{-2, -5}));
  EXPECT_EQ(selection_to_costs(sel({{3, 7}})), (std::vector<double>{kNegInfSentinel}));
  EXPECT_EQ(selection_to_costs(sel({{0, 3}, {1, 3}, {2, 9}})), (std::vector<double>{-3, -3, -3}));
}

TEST(SelectionToCosts, EqualsMinOverOthers) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> n(2, 9);
  std::uniform_int_distribution<int> v(-5, 5);  // small range forces duplicates
  for (int trial = 0; trial < 500; ++trial) {
    SelectionInputs s;
    const int m = n(rng);
    for (int i = 0; i < m; ++i) {
      s.incoming.emplace_back(PlaneId{static_cast<std::uint32_t>(i)}, v(rng));
    }
    const auto out = selection_to_costs(s);
    for (int i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (j != i) {
          best = std::min(best, s.incoming[j].second);
        }
      }
      EXPECT_EQ(out[i], -best);
    }
  }
}

TEST(SelectionToCosts, ShiftCovariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-100, 100);
  for (int trial = 0; trial < 200; ++trial) {
    SelectionInputs s, shifted;
    const double c = v(rng);
    for (std::uint32_t i = 0; i < 5; ++i) {
      const double x = std::round(v(rng));
      s.incoming.emplace_back(PlaneId{i}, x);
      shifted.incoming.emplace_back(PlaneId{i}, x + std::round(c));
    }
    const auto a = selection_to_costs(s);
    const auto b = selection_to_costs(shifted);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(b[i], a[i] - std::round(c));
    }
    EXPECT_EQ(selection_decide(s), selection_decide(shifted));
  }
}

TEST(SelectionDecide, Examples) {
  EXPECT_EQ(selection_decide(sel({{1, 1}, {2, 2}})), PlaneId{1});
  EXPECT_EQ(selection_decide(sel({{3, 7}})), PlaneId{3});
  EXPECT_EQ(selection_decide(sel({{5, 4.0}, {2, 4.0}})), PlaneId{2});
  EXPECT_THROW(selection_decide(SelectionInputs{}), precondition_error);
}

TEST(WorkloadValue, Examples) {
  EXPECT_EQ(workload_value({1000, 1.36}, 0), 0.0);
  EXPECT_EQ(workload_value({2, 1}, 3), 6.0);
  EXPECT_NEAR(workload_value({1000, 1.36}, 2), 2566.8518, 1e-3);
  EXPECT_THROW(workload_value({-1, 1}, 1), precondition_error);
}

TEST(CardinalityMessages, Examples) {
  const CardinalityPotential zero = [](std::size_t) { return 0.0; };
  const CardinalityPotential linear = [](std::size_t eta) { return double(eta); };
  const std::vector<double> in{4.0, -2.0, 9.0};
  EXPECT_EQ(cardinality_messages(zero, in), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(cardinality_messages(linear, std::vector<double>{0, 0}),
            (std::vector<double>{1, 1}));
  EXPECT_EQ(cardinality_messages(linear, std::vector<double>{3, 5}),
            (std::vector<double>{1, 1}));
}

TEST(WorkloadFactorMessages, Examples) {
  PlaneFactorInputs in{{3, 5}, {0, 0}, {1, 1}};
  EXPECT_EQ(workload_factor_messages(in), (std::vector<double>{4, 6}));
  EXPECT_EQ(workload_messages_bruteforce(in), (std::vector<double>{4, 6}));

  PlaneFactorInputs single{{42.5}, {-17.0}, {1000, 1.36}};
  EXPECT_DOUBLE_EQ(workload_factor_messages(single)[0], 42.5 + 1000.0);
  PlaneFactorInputs single_lin{{12.0}, {3.0}, {7, 1}};
  EXPECT_EQ(workload_messages_bruteforce(single_lin), (std::vector<double>{19.0}));

  PlaneFactorInputs bad{{3, 5}, {0}, {1, 1}};
  EXPECT_THROW(workload_factor_messages(bad), precondition_error);
}

TEST(WorkloadFactorMessages, ZeroScaleReturnsDeltas) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto in = random_inputs(rng, 1 + trial % 12);
    in.params.k = 0;
    EXPECT_EQ(workload_factor_messages(in), in.deltas);
  }
}

TEST(WorkloadFactorMessages, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto in = random_inputs(rng, 1 + trial % 10);
    const auto fast = workload_factor_messages(in);
    const auto naive = naive_workload(in.deltas, in.incoming, in.params.k, in.params.alpha);
    const auto brute = workload_messages_bruteforce(in);
    ASSERT_EQ(fast.size(), naive.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      EXPECT_NEAR(fast[i], naive[i], 1e-6);
      EXPECT_NEAR(fast[i], brute[i], 1e-9 * std::max(1.0, std::abs(brute[i])));
    }
  }
}

TEST(WorkloadFactorMessages, TiesInIncomingStayConsistent) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    PlaneFactorInputs in;
    in.params = {10, 1.25};
    for (int i = 0; i < 6; ++i) {
      in.deltas.push_back(small(rng) * 5.0);
      in.incoming.push_back(small(rng) * 5.0 - 5.0);
    }
    const auto fast = workload_factor_messages(in);
    const auto brute = workload_messages_bruteforce(in);
    for (std::size_t i = 0; i < fast.size(); ++i) {
      EXPECT_NEAR(fast[i], brute[i], 1e-9);
    }
  }
}

TEST(WorkloadFactorMessages, PermutationEquivariance) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_inputs(rng, 2 + trial % 9);
    std::vector<std::size_t> perm(in.deltas.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    PlaneFactorInputs permuted;
    permuted.params = in.params;
    for (const auto i : perm) {
      permuted.deltas.push_back(in.deltas[i]);
      permuted.incoming.push_back(in.incoming[i]);
    }
    const auto a = workload_factor_messages(in);
    const auto b = workload_factor_messages(permuted);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      EXPECT_NEAR(b[i], a[perm[i]], 1e-9 * std::max(1.0, std::abs(a[perm[i]])));
    }
  }
}

TEST(WorkloadFactorMessages, PinnedVariablesMatchSentinelEnumeration) {
  // A lone candidate receives the sentinel; the enumeration with that value
  // forces the variable on, which is what the fast path must reproduce.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    auto in = random_inputs(rng, 2 + trial % 6);
    in.incoming[trial % in.incoming.size()] = kNegInfSentinel;
    const auto fast = workload_factor_messages(in);
    const double k = in.params.k, a = in.params.alpha;
    // Shift the sentinel out of the naive sum so doubles stay exact.
    auto finite = in.incoming;
    const std::size_t pinned = trial % in.incoming.size();
    finite[pinned] = -1e7;
    const auto naive = naive_workload(in.deltas, finite, k, a);
    for (std::size_t i = 0; i < fast.size(); ++i) {
      EXPECT_NEAR(fast[i], naive[i], 1e-6) << "i=" << i << " pinned=" << pinned;
    }
  }
}

TEST(WorkloadBruteforce, RefusesLargeInstances) {
  PlaneFactorInputs in;
  in.deltas.assign(kBruteforceLimit + 1, 1.0);
  in.incoming.assign(kBruteforceLimit + 1, 0.0);
  EXPECT_THROW(workload_messages_bruteforce(in), precondition_error);
}

TEST(UnaryShift, ZeroGammaIsIdentity) {
  const MessageFunction base = [](std::span<const double> in) {
    return cardinality_messages([](std::size_t e) { return 3.0 * e * e; }, in);
  };
  const std::vector<double> in{1.5, -4.0, 2.0};
  const std::vector<double> zeros(3, 0.0);
  EXPECT_EQ(unary_shift_messages(base, zeros, in), base(in));
}

TEST(UnaryShift, CardinalityPlusDistancesIsWorkload) {
  const MessageFunction base = [](std::span<const double> in) {
    return cardinality_messages([](std::size_t e) { return double(e); }, in);
  };
  const std::vector<double> gammas{3, 5};
  const std::vector<double> in{0, 0};
  EXPECT_EQ(unary_shift_messages(base, gammas, in), (std::vector<double>{4, 6}));
}

TEST(UnaryShift, ArbitraryFactorMatchesEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<double> table(std::size_t{1} << n);
    for (auto& t : table) {
      t = u(rng);
    }
    std::vector<double> gammas(n), in(n);
    for (std::size_t i = 0; i < n; ++i) {
      gammas[i] = u(rng);
      in[i] = u(rng);
    }
    const BinaryFactor f = [&](std::uint32_t m) { return table[m]; };
    const BinaryFactor h = [&](std::uint32_t m) {
      double v = table[m];
      for (std::size_t i = 0; i < n; ++i) {
        if (m >> i & 1U) {
          v += gammas[i];
        }
      }
      return v;
    };
    const MessageFunction base = [&](std::span<const double> x) {
      return binary_factor_messages_bruteforce(f, n, x);
    };
    const auto shifted = unary_shift_messages(base, gammas, in);
    const auto direct = binary_factor_messages_bruteforce(h, n, in);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(shifted[i], direct[i], 1e-9);
    }
  }
}

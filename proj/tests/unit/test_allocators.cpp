#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lorp/allocators.hpp"
#include "lorp/errors.hpp"
#include "lorp/min_path.hpp"
#include "problems.hpp"

using namespace lorp;
using lorp::testing::random_problem;
using lorp::testing::three_plane_instance;

namespace {

const Assignment kThreePlaneOptimum{
    {RequestId{1}, PlaneId{3}}, {RequestId{2}, PlaneId{2}}, {RequestId{3}, PlaneId{1}}};

Assignment nearest_candidate(const AllocationProblem& problem) {
  Assignment out;
  for (const auto& [r, cands] : problem.candidates) {
    double best = std::numeric_limits<double>::infinity();
    PlaneId who{};
    for (const auto p : cands) {  // ascending, so strict < keeps the lowest id
      const double d = distance(problem.plane_location(p), problem.request_location(r));
      if (d < best) {
        best = d;
        who = p;
      }
    }
    out[r] = who;
  }
  return out;
}

AllocationProblem scaled(const AllocationProblem& p, double s) {
  auto planes = p.planes;
  for (auto& q : planes) {
    q.location = {q.location.x * s, q.location.y * s};
  }
  auto locs = p.request_locations;
  for (auto& [r, l] : locs) {
    l = {l.x * s, l.y * s};
  }
  return make_problem(planes, p.owner, locs, p.candidates);
}

}  // namespace

TEST(ThreePlaneInstance, EveryAllocatorFindsTheOptimum) {
  const auto problem = three_plane_instance();
  EXPECT_EQ(allocate_independent(problem), kThreePlaneOptimum);
  EXPECT_EQ(psi_auction(problem), kThreePlaneOptimum);
  EXPECT_EQ(allocate_hungarian(problem), kThreePlaneOptimum);
  EXPECT_EQ(allocate_greedy_ssi(problem, 6), kThreePlaneOptimum);
  EXPECT_EQ(allocate_workload(problem, {0, 1}, 5), kThreePlaneOptimum);
}

TEST(ThreePlaneInstance, GreedyPickOrder) {
  const auto problem = three_plane_instance();
  std::vector<std::tuple<PlaneId, RequestId, double>> steps;
  allocate_greedy_ssi(problem, 6, [&](const GreedyStep& s) {
    steps.emplace_back(s.plane, s.request, s.cost);
  });
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[0], std::make_tuple(PlaneId{1}, RequestId{3}, 1.0));
  EXPECT_EQ(steps[1], std::make_tuple(PlaneId{2}, RequestId{2}, 2.0));
  EXPECT_EQ(steps[2], std::make_tuple(PlaneId{3}, RequestId{1}, 7.0));
}

TEST(Allocators, SinglePlaneTakesEverything) {
  const auto problem = make_problem({{PlaneId{0}, {0, 0}}},
                                    {{RequestId{0}, PlaneId{0}}, {RequestId{1}, PlaneId{0}}},
                                    {{RequestId{0}, {5, 5}}, {RequestId{1}, {-3, 2}}}, {});
  const Assignment all{{RequestId{0}, PlaneId{0}}, {RequestId{1}, PlaneId{0}}};
  EXPECT_EQ(allocate_independent(problem), all);
  EXPECT_EQ(psi_auction(problem), all);
  EXPECT_EQ(allocate_workload(problem, {1000, 1.36}, 5), all);
  EXPECT_EQ(allocate_greedy_ssi(problem, 6), all);
  EXPECT_EQ(allocate_hungarian(problem), all);
}

TEST(Allocators, OwnerAsSoleCandidateKeepsRequest) {
  const auto problem = make_problem({{PlaneId{0}, {0, 0}}, {PlaneId{1}, {10, 10}}},
                                    {{RequestId{0}, PlaneId{1}}}, {{RequestId{0}, {0, 0}}},
                                    {{RequestId{0}, {}}});
  EXPECT_EQ(psi_auction(problem).at(RequestId{0}), PlaneId{1});
  EXPECT_EQ(allocate_independent(problem).at(RequestId{0}), PlaneId{1});
}

TEST(Allocators, IndependentIsPerRequestNearest) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const auto problem = random_problem(rng, {.integer_coords = trial % 2 == 0});
    EXPECT_EQ(allocate_independent(problem), nearest_candidate(problem));
  }
}

TEST(Allocators, AuctionMatchesIndependent) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const auto problem = random_problem(rng, {.integer_coords = trial % 2 == 0});
    EXPECT_EQ(psi_auction(problem), allocate_independent(problem));
  }
}

TEST(Allocators, ZeroWorkloadMatchesIndependent) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 500; ++trial) {
    const auto problem = random_problem(rng, {.integer_coords = trial % 2 == 0});
    EXPECT_EQ(allocate_workload(problem, {0, 1.36}, 5), allocate_independent(problem));
  }
}

TEST(Allocators, WorkloadSplitsTwoRequests) {
  const PlaneId p1{0}, p2{1};
  const RequestId r1{0}, r2{1};
  const auto problem =
      make_problem({{p1, {0, 0}}, {p2, {10, 0}}}, {{r1, p1}, {r2, p1}},
                   {{r1, {1, 0}}, {r2, {2, 0}}}, {{r1, {p1, p2}}, {r2, {p1, p2}}});
  const maxsum::WorkloadParams params{5, 2};

  // Exhaustive joint cost over the four assignments.
  double best = std::numeric_limits<double>::infinity();
  Assignment arg;
  for (int mask = 0; mask < 4; ++mask) {
    Assignment a{{r1, (mask & 1) ? p2 : p1}, {r2, (mask & 2) ? p2 : p1}};
    std::map<PlaneId, int> load;
    double cost = 0;
    for (const auto& [r, p] : a) {
      cost += distance(problem.plane_location(p), problem.request_location(r));
      ++load[p];
    }
    for (const auto& [p, n] : load) {
      cost += maxsum::workload_value(params, n);
    }
    if (cost < best) {
      best = cost;
      arg = a;
    }
  }
  EXPECT_EQ(best, 19.0);
  const Assignment split{{r1, p1}, {r2, p2}};
  EXPECT_EQ(arg, split);
  EXPECT_EQ(allocate_workload(problem, params, 5), split);
  EXPECT_EQ(allocate_independent(problem), (Assignment{{r1, p1}, {r2, p1}}));
}

TEST(Allocators, OutputsAreTotalAndCandidateRespecting) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const auto problem = random_problem(rng);
    EXPECT_NO_THROW(check_assignment(problem, allocate_independent(problem)));
    EXPECT_NO_THROW(check_assignment(problem, psi_auction(problem)));
    EXPECT_NO_THROW(check_assignment(problem, allocate_workload(problem, {1000, 1.36}, 5)));
    EXPECT_NO_THROW(check_assignment(problem, allocate_hungarian(problem)));
    EXPECT_NO_THROW(check_assignment(problem, allocate_greedy_ssi(problem, 6)));
  }
}

TEST(Allocators, CheckAssignmentRejectsBadOutput) {
  const auto problem = three_plane_instance();
  auto a = kThreePlaneOptimum;
  a[RequestId{1}] = PlaneId{1};  // not a candidate
  EXPECT_THROW(check_assignment(problem, a), malformed_snapshot);
  a.erase(RequestId{1});
  EXPECT_THROW(check_assignment(problem, a), malformed_snapshot);
}

TEST(Allocators, HungarianMatchesBruteForceWithLeftovers) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 100; ++trial) {
    const PlaneId a{0}, b{1};
    std::map<RequestId, Location> locs;
    std::map<RequestId, PlaneId> owner;
    std::map<RequestId, std::vector<PlaneId>> cands;
    for (std::uint32_t r = 0; r < 3; ++r) {
      locs[RequestId{r}] = {u(rng), u(rng)};
      owner[RequestId{r}] = r % 2 ? b : a;
      cands[RequestId{r}] = {a, b};
    }
    const auto problem = make_problem({{a, {u(rng), u(rng)}}, {b, {u(rng), u(rng)}}}, owner,
                                      locs, cands);
    // Every way of matching two of the three requests one-to-one.
    double best = std::numeric_limits<double>::infinity();
    Assignment arg;
    for (std::uint32_t left = 0; left < 3; ++left) {
      std::vector<RequestId> used;
      for (std::uint32_t r = 0; r < 3; ++r) {
        if (r != left) {
          used.push_back(RequestId{r});
        }
      }
      for (int flip = 0; flip < 2; ++flip) {
        const PlaneId first = flip ? b : a, second = flip ? a : b;
        const double cost =
            distance(problem.plane_location(first), locs[used[0]]) +
            distance(problem.plane_location(second), locs[used[1]]);
        if (cost < best) {
          best = cost;
          arg = {{used[0], first}, {used[1], second}, {RequestId{left}, owner[RequestId{left}]}};
        }
      }
    }
    EXPECT_EQ(allocate_hungarian(problem), arg);
  }
}

TEST(Allocators, HungarianSinglePair) {
  const auto problem = make_problem({{PlaneId{0}, {0, 0}}}, {{RequestId{0}, PlaneId{0}}},
                                    {{RequestId{0}, {3, 4}}}, {});
  EXPECT_EQ(allocate_hungarian(problem), (Assignment{{RequestId{0}, PlaneId{0}}}));
}

TEST(Allocators, GreedyPicksCheapestEligiblePair) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto problem = random_problem(rng);
    allocate_greedy_ssi(problem, 6, [&](const GreedyStep& s) {
      for (const auto r : *s.remaining) {
        for (const auto p : problem.candidates.at(r)) {
          const auto it = s.paths->find(p);
          const std::vector<Location> empty;
          const auto& path = it == s.paths->end() ? empty : it->second;
          const double c =
              evaluate_min_path(problem.plane_location(p), path, problem.request_location(r), 6);
          EXPECT_LE(s.cost, c + 1e-9);
        }
      }
    });
  }
}

TEST(Allocators, GreedyTieGoesToLowestRequest) {
  const PlaneId p{0};
  const auto problem =
      make_problem({{p, {0, 0}}}, {{RequestId{0}, p}, {RequestId{1}, p}},
                   {{RequestId{0}, {1, 0}}, {RequestId{1}, {-1, 0}}}, {});
  std::vector<std::pair<RequestId, double>> picks;
  allocate_greedy_ssi(problem, 6, [&](const GreedyStep& s) { picks.emplace_back(s.request, s.cost); });
  ASSERT_EQ(picks.size(), 2u);
  EXPECT_EQ(picks[0], std::make_pair(RequestId{0}, 1.0));
  EXPECT_EQ(picks[1], std::make_pair(RequestId{1}, 3.0));
}

TEST(Allocators, DecisionsAreScaleInvariant) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const auto problem = random_problem(rng);
    const auto big = scaled(problem, 4.0);  // power of two keeps distances exact
    EXPECT_EQ(allocate_independent(problem), allocate_independent(big));
    EXPECT_EQ(psi_auction(problem), psi_auction(big));
    EXPECT_EQ(allocate_hungarian(problem), allocate_hungarian(big));
    EXPECT_EQ(allocate_greedy_ssi(problem, 6), allocate_greedy_ssi(big, 6));
    // Workload scale has to follow the geometry for the decisions to carry over.
    EXPECT_EQ(allocate_workload(problem, {10, 1}, 5), allocate_workload(big, {40, 1}, 5));
  }
}

TEST(AllocatorConfig, NamesRoundTrip) {
  for (const char* name : {"d-independent", "c-independent", "d-workload", "c-workload",
                           "psi-auction", "c-hungarian", "c-greedy"}) {
    EXPECT_EQ(AllocatorConfig::parse(name).name(), name);
  }
  EXPECT_THROW(AllocatorConfig::parse("x-greedy"), precondition_error);
  EXPECT_EQ(AllocatorConfig::parse("c-greedy").knowledge, Knowledge::global);
  EXPECT_EQ(AllocatorConfig::parse("d-workload").knowledge, Knowledge::local);
}

TEST(AllocationProblem, ValidateRejectsBrokenSnapshots) {
  auto problem = three_plane_instance();
  problem.candidates[RequestId{1}] = {PlaneId{9}};
  EXPECT_THROW(problem.validate(), malformed_snapshot);
}

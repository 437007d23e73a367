#pragma once

// Independent reference implementations used only by tests. None of these
// call into the market composition or scoring code paths they check.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::testing {

using LegSequence = std::vector<std::string>;

/// Every ordered selection of distinct legs (length 1..max_legs) that forms
/// a time-feasible simple path from request origin to destination and
/// satisfies the request's hard constraints. Exhaustive over permutations.
std::set<LegSequence> enumerate_paths_exhaustively(const market::TransportRequest& request,
                                                   const std::vector<market::RouteLeg>& legs,
                                                   int max_legs, market::Minutes slack);

struct OracleScore {
  double cost;
  double time;
  double insurance;
  double total;
};

/// Straight transcription of the min-max weighted-sum formula in long double.
OracleScore oracle_score(const market::Itinerary& itinerary,
                         const std::vector<market::Itinerary>& pool, double w_cost, double w_time,
                         double w_insurance);

/// Random network/request generators for property tests (test-local RNG).
std::vector<market::RouteLeg> random_network(std::mt19937_64& rng, int locations, int legs,
                                             const std::vector<AgentId>& providers);
market::TransportRequest random_request(std::mt19937_64& rng, int locations);

/// Random pool of itineraries with distinct ids (one synthetic leg each).
std::vector<market::Itinerary> random_pool(std::mt19937_64& rng, int size);

}  // namespace agmarket::testing

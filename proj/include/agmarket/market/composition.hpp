#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::market {

struct CompositionLimits {
  int max_legs = 4;
  Minutes transfer_slack = 0;
};

struct CompositionResult {
  /// Ascending total_cost, then itinerary_id.
  std::vector<Itinerary> itineraries;
  bool no_solution() const { return itineraries.empty(); }
};

/// Enumerates time-feasible simple paths (no location visited twice) from
/// the request origin to its destination, bounded by the leg-count limit
/// and filtered by the request's hard constraints, and returns the k
/// cheapest. Legs with capacity below the cargo size are ignored.
///
/// The effective leg bound is min(limits.max_legs, constraints.max_legs).
CompositionResult compose_itineraries(const TransportRequest& request,
                                      std::span<const RouteLeg> legs, std::size_t k,
                                      const CompositionLimits& limits = {});

/// True when the itinerary satisfies every constraint present on the request.
bool satisfies_constraints(const Itinerary& itinerary, const HardConstraints& constraints);

}  // namespace agmarket::market

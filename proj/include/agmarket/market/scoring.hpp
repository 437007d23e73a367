#pragma once

#include <span>
#include <vector>

#include "agmarket/market/types.hpp"

namespace agmarket::market {

/// Scores within this distance are treated as equal when ranking.
inline constexpr double kScoreTolerance = 1e-9;

/// Weighted sum of min-max normalized utilities over the pool:
///   u_cost      = (max_cost - cost) / (max_cost - min_cost)
///   u_time      = (max_time - delivery) / (max_time - min_time)
///   u_insurance = (ins - min_ins) / (max_ins - min_ins)
/// A criterion whose pool spread is zero has utility 1.
/// Throws std::invalid_argument if `itinerary` is not in `pool`.
Proposal score_itinerary(const Itinerary& itinerary, std::span<const Itinerary> pool,
                         const CriteriaProfile& weights);

/// Descending score; ties (within kScoreTolerance) by ascending total_cost,
/// then itinerary_id.
std::vector<Proposal> rank_proposals(std::span<const Itinerary> pool,
                                     const CriteriaProfile& weights);

/// Strict ordering used by rank_proposals.
bool ranks_before(const Proposal& a, const Proposal& b);

}  // namespace agmarket::market

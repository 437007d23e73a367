#include "agmarket/market/network_generator.hpp"

#include <random>

namespace agmarket::market {

std::string generated_location(int index) { return "L" + std::to_string(index); }

std::vector<RouteLeg> generate_network(std::uint64_t seed, const NetworkParams& params,
                                       const std::vector<AgentId>& providers) {
  if (params.locations < 2) throw InvalidValue("a network needs at least two locations");
  if (providers.empty()) throw InvalidValue("a network needs at least one provider");

  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  std::vector<RouteLeg> legs;
  for (int n = 0; n < params.legs; ++n) {
    RouteLeg leg;
    leg.leg_id = params.leg_prefix + std::to_string(n);
    leg.provider = providers[static_cast<std::size_t>(n) % providers.size()];
    const auto from = pick(0, params.locations - 1);
    auto to = pick(0, params.locations - 2);
    if (to >= from) ++to;
    leg.origin = generated_location(static_cast<int>(from));
    leg.destination = generated_location(static_cast<int>(to));
    leg.depart = pick(0, params.horizon);
    leg.arrive = leg.depart + pick(1, params.max_duration);
    leg.cost = Money::from_cents(pick(100, params.max_cost_cents));
    leg.capacity = pick(0, params.max_capacity);
    leg.insurance_level = static_cast<int>(pick(0, kMaxInsuranceLevel));
    legs.push_back(std::move(leg));
  }
  return legs;
}

}  // namespace agmarket::market

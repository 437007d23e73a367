#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agmarket/market/amendment.hpp"
#include "agmarket/market/scoring.hpp"
#include "agmarket/market/types.hpp"

namespace agmarket::market {

/// The broker's pool of proposals for one request. Statuses survive
/// re-ranking; scores are always recomputed over the whole pool.
class ProposalBook {
 public:
  ProposalBook() = default;
  ProposalBook(std::vector<Itinerary> pool, CriteriaProfile weights);

  const CriteriaProfile& weights() const { return weights_; }
  bool empty() const { return ranked_.empty(); }

  /// Current ranking.
  const std::vector<Proposal>& ranked() const { return ranked_; }
  const Proposal* find(const std::string& itinerary_id) const;

  void rerank(const CriteriaProfile& weights);
  /// Replaces the stored proposal (same itinerary_id) and re-ranks.
  void update(const Proposal& proposal);
  /// Throws std::out_of_range for unknown ids, InvalidStatusTransition
  /// outside the status machine.
  void set_status(const std::string& itinerary_id, ProposalStatus status);

  /// True once any proposal was selected or confirmed.
  bool has_selection() const;

 private:
  void rescore();

  CriteriaProfile weights_;
  std::vector<Proposal> ranked_;
};

}  // namespace agmarket::market

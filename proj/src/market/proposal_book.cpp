#include "agmarket/market/proposal_book.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace agmarket::market {

ProposalBook::ProposalBook(std::vector<Itinerary> pool, CriteriaProfile weights)
    : weights_(weights) {
  if (pool.empty()) return;
  ranked_ = rank_proposals(pool, weights_);
}

const Proposal* ProposalBook::find(const std::string& itinerary_id) const {
  for (const auto& p : ranked_) {
    if (p.itinerary.itinerary_id == itinerary_id) return &p;
  }
  return nullptr;
}

void ProposalBook::rescore() {
  if (ranked_.empty()) return;
  std::vector<Itinerary> pool;
  std::map<std::string, const Proposal*> previous;
  for (const auto& p : ranked_) {
    pool.push_back(p.itinerary);
    previous[p.itinerary.itinerary_id] = &p;
  }
  auto fresh = rank_proposals(pool, weights_);
  for (auto& p : fresh) {
    const Proposal* old = previous.at(p.itinerary.itinerary_id);
    p.status = old->status;
    p.offered_leg_costs = old->offered_leg_costs;
  }
  ranked_ = std::move(fresh);
}

void ProposalBook::rerank(const CriteriaProfile& weights) {
  weights_ = weights;
  rescore();
}

void ProposalBook::update(const Proposal& proposal) {
  auto it = std::find_if(ranked_.begin(), ranked_.end(), [&](const Proposal& p) {
    return p.itinerary.itinerary_id == proposal.itinerary.itinerary_id;
  });
  if (it == ranked_.end()) {
    throw std::out_of_range("unknown proposal " + proposal.itinerary.itinerary_id);
  }
  *it = proposal;
  rescore();
}

void ProposalBook::set_status(const std::string& itinerary_id, ProposalStatus status) {
  for (auto& p : ranked_) {
    if (p.itinerary.itinerary_id == itinerary_id) {
      p.transition_to(status);
      return;
    }
  }
  throw std::out_of_range("unknown proposal " + itinerary_id);
}

bool ProposalBook::has_selection() const {
  return std::any_of(ranked_.begin(), ranked_.end(), [](const Proposal& p) {
    return p.status == ProposalStatus::Selected || p.status == ProposalStatus::Confirmed;
  });
}

}  // namespace agmarket::market

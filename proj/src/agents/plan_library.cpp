#include "agmarket/agents/plan_library.hpp"

#include <set>

#include "agmarket/agents/perception.hpp"

namespace agmarket::agents {

using kernel::FsmSpec;
using kernel::Outcome;

namespace {

std::shared_ptr<FsmSpec> make(std::string name, std::vector<std::string> states) {
  auto spec = std::make_shared<FsmSpec>();
  spec->name = std::move(name);
  spec->initial = states.front();
  spec->states = std::move(states);
  spec->terminals = {{"Ok", Outcome::Ok}, {"Fail", Outcome::Fail}};
  return spec;
}

SpecPtr checked(std::shared_ptr<FsmSpec> spec) {
  spec->validate();
  return spec;
}

}  // namespace

void PlanLibrary::add(const std::string& goal, SpecPtr spec) {
  spec->validate();
  entries_[goal] = std::move(spec);
}

SpecPtr PlanLibrary::retrieve(const std::string& goal) const {
  auto it = entries_.find(goal);
  if (it == entries_.end()) throw NoPlan("no plan for goal " + goal);
  return it->second;
}

std::string PlanLibrary::describe() const {
  std::string out;
  std::set<std::string> seen;
  for (const auto& [goal, spec] : entries_) {
    if (!seen.insert(spec->name).second) continue;
    out += spec->describe();
  }
  return out;
}

// Reconstructed plan for the broker's evaluation of a customer request.
SpecPtr evaluate_customer_requirements_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Evaluate_Customer_Requirements",
                  {"ValidateRequirements", "QueryProviders", "CollectResponses", "ComposeAndRank",
                   "PresentResults"});
    s->on("ValidateRequirements", "valid", "QueryProviders")
        .on("ValidateRequirements", "invalid", "Fail")
        .on("QueryProviders", "queried", "CollectResponses")
        .on("QueryProviders", "no_providers", "Fail")
        .on("CollectResponses", "all_replied", "ComposeAndRank")
        .on("CollectResponses", "deadline", "ComposeAndRank")
        .on("CollectResponses", "no_offers", "Fail")
        .on("ComposeAndRank", "ranked", "PresentResults")
        .on("ComposeAndRank", "no_solution", "Fail")
        .on("PresentResults", "presented", "Ok");
    return checked(s);
  }();
  return spec;
}

SpecPtr handle_selection_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Handle_Selection",
                  {"ResolveSelection", "RequestReservations", "CollectConfirmations",
                   "InformConfirmed", "Rollback", "CollectReleases", "InformFailed"});
    s->on("ResolveSelection", "resolved", "RequestReservations")
        .on("ResolveSelection", "unknown", "Fail")
        .on("ResolveSelection", "already_decided", "Fail")
        .on("RequestReservations", "requested", "CollectConfirmations")
        .on("CollectConfirmations", "all_confirmed", "InformConfirmed")
        .on("CollectConfirmations", "refused", "Rollback")
        .on("CollectConfirmations", "timeout", "Rollback")
        .on("InformConfirmed", "informed", "Ok")
        .on("Rollback", "releasing", "CollectReleases")
        .on("Rollback", "nothing_to_release", "InformFailed")
        .on("CollectReleases", "released", "InformFailed")
        .on("CollectReleases", "timeout", "InformFailed")
        .on("InformFailed", "informed", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr handle_amendment_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Handle_Amendment",
                  {"ResolveProposal", "ForwardAmendment", "CollectAnswers", "InformOutcome"});
    s->on("ResolveProposal", "resolved", "ForwardAmendment")
        .on("ResolveProposal", "unknown", "Fail")
        .on("ResolveProposal", "already_decided", "Fail")
        .on("ResolveProposal", "invalid", "Fail")
        .on("ForwardAmendment", "forwarded", "CollectAnswers")
        .on("CollectAnswers", "answered", "InformOutcome")
        .on("CollectAnswers", "timeout", "InformOutcome")
        .on("InformOutcome", "informed", "Ok")
        .on("InformOutcome", "already_decided", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr rerank_proposals_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Rerank_Proposals", {"Rerank"});
    s->on("Rerank", "reranked", "Ok").on("Rerank", "unknown", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr update_network_cache_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Update_Network_Cache", {"ApplyUpdate"});
    s->on("ApplyUpdate", "applied", "Ok").on("ApplyUpdate", "rejected", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr answer_call_for_proposals_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Answer_Call_For_Proposals", {"MatchLegs"});
    s->on("MatchLegs", "proposed", "Ok").on("MatchLegs", "refused", "Ok").on("MatchLegs", "ignored", "Ok");
    s->on("MatchLegs", "invalid", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr treat_reservation_request_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Treat_Reservation_Request", {"Dispatch", "ReserveLegs", "ReleaseLegs", "UpdatePlan"});
    s->on("Dispatch", "reserve", "ReserveLegs")
        .on("Dispatch", "release", "ReleaseLegs")
        .on("ReserveLegs", "reserved", "UpdatePlan")
        .on("ReserveLegs", "refused", "Fail")
        .on("ReleaseLegs", "released", "UpdatePlan")
        .on("ReleaseLegs", "nothing_released", "Ok")
        .on("UpdatePlan", "updated", "Ok");
    return checked(s);
  }();
  return spec;
}

SpecPtr answer_amendment_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Answer_Amendment", {"Decide"});
    s->on("Decide", "accepted", "Ok").on("Decide", "rejected", "Ok").on("Decide", "invalid", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr itinerary_be_decided_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Itinerary_Be_Decided", {"DecideRequirements", "AwaitProposals", "ReviewProposals",
                                           "AwaitAmendment", "AwaitOutcome"});
    s->on("DecideRequirements", "requested", "AwaitProposals")
        .on("DecideRequirements", "no_broker", "Fail")
        .on("AwaitProposals", "proposals", "ReviewProposals")
        .on("AwaitProposals", "no_solution", "Fail")
        .on("AwaitProposals", "rejected", "Fail")
        .on("ReviewProposals", "reweighted", "AwaitProposals")
        .on("ReviewProposals", "amending", "AwaitAmendment")
        .on("ReviewProposals", "selected", "AwaitOutcome")
        .on("ReviewProposals", "done", "Ok")
        .on("AwaitAmendment", "answered", "ReviewProposals")
        .on("AwaitAmendment", "failed", "ReviewProposals")
        .on("AwaitOutcome", "confirmed", "Ok")
        .on("AwaitOutcome", "refused", "Fail")
        .on("AwaitOutcome", "failed", "Fail");
    return checked(s);
  }();
  return spec;
}

SpecPtr record_notice_spec() {
  static const SpecPtr spec = [] {
    auto s = make("Record_Notice", {"Record"});
    s->on("Record", "recorded", "Ok");
    return checked(s);
  }();
  return spec;
}

PlanLibrary broker_library() {
  PlanLibrary lib;
  lib.add("serve-transport-request", evaluate_customer_requirements_spec());
  lib.add("provider-response", evaluate_customer_requirements_spec());
  lib.add("confirm-selection", handle_selection_spec());
  lib.add("reservation-reply", handle_selection_spec());
  lib.add("handle-amendment", handle_amendment_spec());
  lib.add("amendment-reply", handle_amendment_spec());
  lib.add("rerank-proposals", rerank_proposals_spec());
  lib.add("update-network", update_network_cache_spec());
  lib.add(kRecordNotice, record_notice_spec());
  return lib;
}

PlanLibrary provider_library() {
  PlanLibrary lib;
  lib.add("treat-cfp", answer_call_for_proposals_spec());
  lib.add("treat-reservation", treat_reservation_request_spec());
  lib.add("treat-amendment", answer_amendment_spec());
  lib.add(kRecordNotice, record_notice_spec());
  return lib;
}

PlanLibrary customer_library() {
  PlanLibrary lib;
  for (const char* goal : {"itinerary-be-decided", "proposals-received", "evaluation-failed",
                           "request-rejected", "amendment-outcome", "selection-outcome",
                           "broker-failure"})
    lib.add(goal, itinerary_be_decided_spec());
  lib.add(kRecordNotice, record_notice_spec());
  return lib;
}

PlanLibrary library_for(model::Role role) {
  switch (role) {
    case model::Role::Customer: return customer_library();
    case model::Role::Broker: return broker_library();
    case model::Role::Provider: return provider_library();
  }
  return {};
}

}  // namespace agmarket::agents

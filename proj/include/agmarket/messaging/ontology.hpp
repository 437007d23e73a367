#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agmarket/market/amendment.hpp"
#include "agmarket/market/types.hpp"

namespace agmarket::messaging {

enum class Ontology { TransportOntology, RuntimeOntology };

/// Raw legs a provider puts forward for a call for proposals.
struct LegOffer {
  std::string request_id;
  std::vector<market::RouteLeg> legs;
};

/// Ranked proposals for a request, as presented to the customer.
struct ProposalSet {
  std::string request_id;
  market::CriteriaProfile weights;
  std::vector<market::Proposal> proposals;
};

struct CriteriaUpdate {
  std::string request_id;
  market::CriteriaProfile weights;
};

struct Selection {
  std::string request_id;
  std::string itinerary_id;
};

/// Amendment as it travels customer -> broker (no share) and
/// broker -> provider -> broker (with the provider's share).
struct AmendmentBody {
  market::Amendment amendment;
  std::optional<market::AmendmentShare> share;
};

struct ReservationRequest {
  enum class Action { Reserve, Release };
  Action action = Action::Reserve;
  /// Prefix for the per-leg reservation ids ("<id>:<leg_id>").
  std::string reservation_id;
  std::string request_id;
  std::string itinerary_id;
  std::vector<std::string> leg_ids;
  market::CargoUnits units = 0;
};

struct ReservationOutcome {
  enum class Status { Confirmed, Refused, Released, Failed };
  struct LegState {
    std::string leg_id;
    market::CargoUnits remaining = 0;
  };
  Status status = Status::Failed;
  std::string reservation_id;
  std::string request_id;
  std::string itinerary_id;
  std::vector<LegState> legs;
  std::string reason;
};

std::string_view to_string(ReservationOutcome::Status status);

/// A provider's changed legs (remaining capacity in `capacity`) and removals.
struct PlanUpdate {
  AgentId provider;
  std::vector<market::RouteLeg> legs;
  std::vector<std::string> removed;
};

struct ErrorInfo {
  std::string code;
  std::string message;
};

using Body = std::variant<market::TransportRequest, LegOffer, ProposalSet, CriteriaUpdate,
                          Selection, AmendmentBody, ReservationRequest, ReservationOutcome,
                          PlanUpdate, ErrorInfo>;

/// Mirrors the alternatives of Body, in order.
enum class BodyTag {
  TransportRequest,
  LegOffer,
  ProposalSet,
  CriteriaUpdate,
  Selection,
  Amendment,
  ReservationRequest,
  ReservationResult,
  PlanUpdate,
  ErrorInfo,
};

std::string_view to_string(BodyTag tag);

struct ContentPayload {
  Ontology ontology = Ontology::TransportOntology;
  Body body = ErrorInfo{};

  BodyTag tag() const { return static_cast<BodyTag>(body.index()); }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&body);
  }
};

/// Transport-ontology payload for market bodies, runtime ontology for errors.
ContentPayload make_payload(Body body);

/// One-line description used in trace events.
std::string summarize(const ContentPayload& content);

}  // namespace agmarket::messaging

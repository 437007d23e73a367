#include "agmarket/messaging/ontology.hpp"

#include <sstream>

namespace agmarket::messaging {

std::string_view to_string(ReservationOutcome::Status status) {
  switch (status) {
    case ReservationOutcome::Status::Confirmed: return "confirmed";
    case ReservationOutcome::Status::Refused: return "refused";
    case ReservationOutcome::Status::Released: return "released";
    case ReservationOutcome::Status::Failed: return "failed";
  }
  return "failed";
}

std::string_view to_string(BodyTag tag) {
  switch (tag) {
    case BodyTag::TransportRequest: return "TransportRequest";
    case BodyTag::LegOffer: return "LegOffer";
    case BodyTag::ProposalSet: return "ProposalSet";
    case BodyTag::CriteriaUpdate: return "CriteriaUpdate";
    case BodyTag::Selection: return "Selection";
    case BodyTag::Amendment: return "Amendment";
    case BodyTag::ReservationRequest: return "ReservationRequest";
    case BodyTag::ReservationResult: return "ReservationResult";
    case BodyTag::PlanUpdate: return "PlanUpdate";
    case BodyTag::ErrorInfo: return "ErrorInfo";
  }
  return "?";
}

ContentPayload make_payload(Body body) {
  ContentPayload p;
  p.ontology = std::holds_alternative<ErrorInfo>(body) ? Ontology::RuntimeOntology
                                                       : Ontology::TransportOntology;
  p.body = std::move(body);
  return p;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string weights_text(const market::CriteriaProfile& w) {
  std::ostringstream out;
  out << "w=" << w.cost() << "/" << w.time() << "/" << w.insurance();
  return out.str();
}

}  // namespace

std::string summarize(const ContentPayload& content) {
  std::ostringstream out;
  out << to_string(content.tag()) << "{";
  std::visit(
      Overloaded{
          [&](const market::TransportRequest& r) {
            out << r.request_id << " " << r.origin << "->" << r.destination
                << " cargo=" << r.cargo_size << " window=" << r.earliest_pickup << ".."
                << r.latest_delivery;
          },
          [&](const LegOffer& o) { out << o.request_id << " legs=" << o.legs.size(); },
          [&](const ProposalSet& s) {
            out << s.request_id << " n=" << s.proposals.size();
            if (!s.proposals.empty()) out << " top=" << s.proposals.front().itinerary.itinerary_id;
          },
          [&](const CriteriaUpdate& u) { out << u.request_id << " " << weights_text(u.weights); },
          [&](const Selection& s) { out << s.request_id << " " << s.itinerary_id; },
          [&](const AmendmentBody& a) {
            out << a.amendment.itinerary_id;
            if (a.amendment.target_cost) out << " cost=" << a.amendment.target_cost->to_string();
            if (a.amendment.target_delivery_time)
              out << " time=" << *a.amendment.target_delivery_time;
            if (a.amendment.target_insurance) out << " insurance=" << *a.amendment.target_insurance;
            if (a.share) {
              out << " share=" << a.share->provider.name;
              if (a.share->target_cost) out << ":" << a.share->target_cost->to_string();
            }
          },
          [&](const ReservationRequest& r) {
            out << (r.action == ReservationRequest::Action::Reserve ? "reserve " : "release ")
                << r.reservation_id << " legs=" << r.leg_ids.size() << " units=" << r.units;
          },
          [&](const ReservationOutcome& r) {
            out << to_string(r.status) << " " << r.reservation_id;
            if (!r.reason.empty()) out << " reason=" << r.reason;
          },
          [&](const PlanUpdate& u) {
            out << u.provider.name << " changed=" << u.legs.size() << " removed=" << u.removed.size();
          },
          [&](const ErrorInfo& e) {
            out << e.code;
            if (!e.message.empty()) out << ": " << e.message;
          },
      },
      content.body);
  out << "}";
  return out.str();
}

}  // namespace agmarket::messaging

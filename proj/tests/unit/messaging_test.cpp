#include <gtest/gtest.h>

#include "agmarket/messaging/post_office.hpp"
#include "agmarket/messaging/trace.hpp"

using namespace agmarket;
using namespace agmarket::messaging;

namespace {

AgentId id(std::string name, std::uint32_t ordinal) { return {std::move(name), ordinal}; }

AclMessage inform(const AgentId& from, const AgentId& to, std::string conv, Tick tick = 0) {
  AclMessage m;
  m.performative = Performative::Inform;
  m.sender = from;
  m.receivers = {to};
  m.conversation_id = std::move(conv);
  m.content = make_payload(ErrorInfo{"note", "hello"});
  m.sent_tick = tick;
  return m;
}

class PostOfficeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    po.attach(a);
    po.attach(b);
    po.attach(c);
  }
  PostOffice po;
  AgentId a = id("a", 0), b = id("b", 1), c = id("c", 2);
};

}  // namespace

TEST(Performative, RoundTripsFipaNames) {
  for (auto p : {Performative::Request, Performative::Inform, Performative::Cfp,
                 Performative::Propose, Performative::Refuse, Performative::AcceptProposal,
                 Performative::RejectProposal, Performative::Confirm, Performative::Failure,
                 Performative::NotUnderstood})
    EXPECT_EQ(performative_from_string(to_string(p)), p);
  EXPECT_EQ(to_string(Performative::AcceptProposal), "accept-proposal");
  EXPECT_FALSE(performative_from_string("agree"));
}

TEST(Performative, BodyTable) {
  EXPECT_TRUE(body_consistent(Performative::Cfp, BodyTag::TransportRequest));
  EXPECT_FALSE(body_consistent(Performative::Cfp, BodyTag::Selection));
  EXPECT_TRUE(body_consistent(Performative::Confirm, BodyTag::ReservationResult));
  EXPECT_FALSE(body_consistent(Performative::NotUnderstood, BodyTag::Amendment));
  EXPECT_TRUE(body_consistent(Performative::Propose, BodyTag::Amendment));
}

TEST(Envelope, RejectsInconsistentMessages) {
  auto m = inform(id("a", 0), id("b", 1), "c1");
  EXPECT_NO_THROW(validate_envelope(m));
  auto bad = m;
  bad.receivers.clear();
  EXPECT_THROW(validate_envelope(bad), std::invalid_argument);
  bad = m;
  bad.receivers.push_back(m.sender);
  EXPECT_THROW(validate_envelope(bad), std::invalid_argument);
  bad = m;
  bad.performative = Performative::Cfp;
  EXPECT_THROW(validate_envelope(bad), std::invalid_argument);
}

TEST(Envelope, ReplyKeepsConversation) {
  auto m = inform(id("a", 0), id("b", 1), "conv-7");
  m.reply_with = "r1";
  auto reply = make_reply(m, Performative::NotUnderstood, make_payload(ErrorInfo{"x", ""}));
  EXPECT_EQ(reply.conversation_id, "conv-7");
  EXPECT_EQ(reply.in_reply_to, "r1");
  ASSERT_EQ(reply.receivers.size(), 1u);
  EXPECT_EQ(reply.receivers[0].name, "a");
  EXPECT_EQ(reply.content.ontology, Ontology::RuntimeOntology);
}

TEST_F(PostOfficeTest, FifoPerSenderAndSelectiveReceive) {
  po.send(inform(a, c, "x", 0));
  po.send(inform(b, c, "y", 0));
  po.send(inform(a, c, "x", 1));
  auto first = po.receive_matching("c", {.sender = std::string("a")});
  ASSERT_TRUE(first);
  EXPECT_EQ(first->sent_tick, 0);
  auto from_b = po.receive_matching("c", {.conversation_id = std::string("y")});
  ASSERT_TRUE(from_b);
  EXPECT_EQ(from_b->sender.name, "b");
  EXPECT_FALSE(po.receive_matching("c", {.conversation_id = std::string("y")}));
  EXPECT_EQ(po.mailbox_size("c"), 1u);
}

TEST_F(PostOfficeTest, SentBeforeHidesCurrentTickMessages) {
  po.send(inform(a, b, "x", 5));
  EXPECT_FALSE(po.receive_matching("b", {}, 5));
  EXPECT_TRUE(po.receive_matching("b", {}, 6));
}

TEST_F(PostOfficeTest, UnknownReceiverBecomesFailureEvent) {
  auto m = inform(a, id("ghost", 9), "x", 3);
  m.receivers.push_back(b);
  auto receipt = po.send(m);
  EXPECT_FALSE(receipt.ok());
  EXPECT_EQ(receipt.unknown_receivers, std::vector<std::string>{"ghost"});
  EXPECT_EQ(receipt.delivered, std::vector<std::string>{"b"});
  auto trace = po.export_trace();
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[0].performative, Performative::Failure);
  EXPECT_EQ(trace[0].sender, "a");
  EXPECT_EQ(trace[0].receiver, "a");
  EXPECT_EQ(trace[1].receiver, "b");
}

TEST_F(PostOfficeTest, MulticastTracesOneEventPerReceiver) {
  auto m = inform(a, b, "x", 0);
  m.receivers.push_back(c);
  po.send(m);
  auto trace = po.export_trace();
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[0].seq, 0u);
  EXPECT_EQ(trace[1].seq, 1u);
}

TEST_F(PostOfficeTest, WakeFlagsAreDueOnlyAfterSendTick) {
  po.send(inform(a, b, "x", 4));
  EXPECT_TRUE(po.take_due_wakes(4).empty());
  EXPECT_TRUE(po.has_pending_wakes());
  EXPECT_EQ(po.take_due_wakes(5), std::vector<std::string>{"b"});
  EXPECT_FALSE(po.has_pending_wakes());
}

TEST_F(PostOfficeTest, DirectoryReplacesAndOrdersByOrdinal) {
  po.register_service({c, "transport", {{"v", "1"}}});
  po.register_service({a, "transport", {}});
  po.register_service({c, "transport", {{"v", "2"}}});
  auto found = po.search_directory("transport");
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].agent.name, "a");
  EXPECT_EQ(found[1].attributes.at("v"), "2");
  EXPECT_TRUE(po.search_directory("broker").empty());
  po.detach("c");
  EXPECT_EQ(po.search_directory("transport").size(), 1u);
  EXPECT_THROW(po.register_service({id("nobody", 7), "transport", {}}), UnknownAgent);
}

TEST_F(PostOfficeTest, TraceFilterAndListener) {
  std::vector<std::uint64_t> seen;
  po.set_trace_listener([&](const TraceEvent& e) { seen.push_back(e.seq); });
  po.send(inform(a, b, "x"));
  po.send(inform(a, b, "y"));
  po.record_failure(c, "x", "boom", 2);
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(po.export_trace(std::string("x")).size(), 2u);
}

TEST(Trace, JsonlRoundTrip) {
  std::vector<TraceEvent> events{
      {0, 1, "r/1", Performative::Request, "customer1", "broker", "TransportRequest{r}"},
      {1, 2, "r/1", Performative::Cfp, "broker", "provider1", "with \"quotes\""},
  };
  auto text = to_jsonl(events);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"seq":0,"tick":1,"conversation_id":"r/1","performative":"request",)"
            R"("sender":"customer1","receiver":"broker","content_summary":"TransportRequest{r}"})");
  EXPECT_EQ(parse_jsonl(text), events);
}

TEST(Trace, ParseReportsLine) {
  try {
    parse_jsonl("{\"seq\":0}\n");
    FAIL();
  } catch (const MalformedTrace& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  EXPECT_THROW(parse_jsonl("not json"), MalformedTrace);
}

TEST(Diagram, EmptyTraceIsHeaderOnly) {
  EXPECT_EQ(render_sequence_diagram({}), "\n");
}

TEST(Diagram, LanesAndRows) {
  std::vector<TraceEvent> events{
      {0, 1, "c", Performative::Request, "cust", "broker", ""},
      {1, 2, "c", Performative::Cfp, "broker", "prov", ""},
      {2, 3, "c", Performative::Inform, "prov", "cust", ""},
      {3, 4, "c", Performative::Failure, "prov", "prov", ""},
  };
  auto text = render_sequence_diagram(events);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 4), "cust");
  EXPECT_NE(line.find("broker"), std::string::npos);
  EXPECT_LT(line.find("broker"), line.find("prov"));
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_NE(text.find("cust -> broker : request(c)"), std::string::npos);
  EXPECT_NE(text.find("prov -> prov : failure(c)"), std::string::npos);
}

TEST(Diagram, RejectsSeqGap) {
  std::vector<TraceEvent> events{
      {0, 1, "c", Performative::Request, "a", "b", ""},
      {2, 1, "c", Performative::Inform, "b", "a", ""},
  };
  EXPECT_THROW(render_sequence_diagram(events), MalformedTrace);
}

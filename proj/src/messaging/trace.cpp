#include "agmarket/messaging/trace.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

namespace agmarket::messaging {

namespace {

using nlohmann::ordered_json;

constexpr std::size_t kLaneWidth = 14;

}  // namespace

std::string to_json_line(const TraceEvent& e) {
  ordered_json j;
  j["seq"] = e.seq;
  j["tick"] = e.tick;
  j["conversation_id"] = e.conversation_id;
  j["performative"] = std::string(to_string(e.performative));
  j["sender"] = e.sender;
  j["receiver"] = e.receiver;
  j["content_summary"] = e.content_summary;
  return j.dump();
}

std::string to_jsonl(std::span<const TraceEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> parse_jsonl(std::string_view text) {
  std::vector<TraceEvent> events;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fail = [&](const std::string& why) {
      throw MalformedTrace("line " + std::to_string(line_no) + ": " + why);
    };
    try {
      auto j = nlohmann::json::parse(line);
      TraceEvent e;
      e.seq = j.at("seq").get<std::uint64_t>();
      e.tick = j.at("tick").get<Tick>();
      e.conversation_id = j.at("conversation_id").get<std::string>();
      auto p = performative_from_string(j.at("performative").get<std::string>());
      if (!p) fail("unknown performative");
      e.performative = *p;
      e.sender = j.at("sender").get<std::string>();
      e.receiver = j.at("receiver").get<std::string>();
      e.content_summary = j.value("content_summary", std::string{});
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      fail(ex.what());
    }
  }
  return events;
}

std::string render_sequence_diagram(std::span<const TraceEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].seq != events.front().seq + i)
      throw MalformedTrace("seq gap after " + std::to_string(events[i > 0 ? i - 1 : 0].seq));

  std::vector<std::string> lanes;
  auto lane_of = [&](const std::string& name) {
    auto it = std::find(lanes.begin(), lanes.end(), name);
    if (it != lanes.end()) return static_cast<std::size_t>(it - lanes.begin());
    lanes.push_back(name);
    return lanes.size() - 1;
  };
  for (const auto& e : events) {
    lane_of(e.sender);
    lane_of(e.receiver);
  }

  std::ostringstream out;
  std::string header;
  for (const auto& name : lanes) {
    std::string cell = name.substr(0, kLaneWidth - 1);
    cell.resize(kLaneWidth, ' ');
    header += cell;
  }
  while (!header.empty() && header.back() == ' ') header.pop_back();
  out << header << '\n';

  const std::size_t width = lanes.size() * kLaneWidth;
  for (const auto& e : events) {
    std::string row(width, ' ');
    for (std::size_t l = 0; l < lanes.size(); ++l) row[l * kLaneWidth] = '|';
    auto from = lane_of(e.sender) * kLaneWidth;
    auto to = lane_of(e.receiver) * kLaneWidth;
    if (from == to) {
      row[from] = 'x';
    } else {
      auto lo = std::min(from, to);
      auto hi = std::max(from, to);
      for (auto c = lo + 1; c < hi; ++c) row[c] = '-';
      if (to > from)
        row[hi - 1] = '>';
      else
        row[lo + 1] = '<';
    }
    out << row << e.sender << " -> " << e.receiver << " : " << to_string(e.performative) << "("
        << e.conversation_id << ")\n";
  }
  return out.str();
}

}  // namespace agmarket::messaging

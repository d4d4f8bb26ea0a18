#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "fusion/http.hpp"
#include "support/generators.hpp"

using namespace fusion;
using nlohmann::json;

namespace {

json fixture(const std::string& name) {
  std::ifstream in(std::string(FUSION_SOURCE_DIR) + "/fixtures/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

}  // namespace

TEST(Session, NullGameAgainstMachineEve) {
  SessionManager sm;
  auto created = sm.create(fixture("g_e_session.json"));
  EXPECT_EQ(created["id"], "s1");
  EXPECT_EQ(created["state"]["turn"], "Adam");
  EXPECT_EQ(created["state"]["round"], 1);

  auto eve = null_eve_synthesize({zoo::zero()});
  auto st = sm.move("s1", {{"move", "0"}, {"round", 1}});
  std::vector<NullMove> play{Word("0")};
  EXPECT_EQ(st["history"].size(), 2u);
  EXPECT_EQ(st["clopens"][0]["words"], json(std::get<ClopenSet>(eve(play))));
  EXPECT_EQ(st["turn"], "Adam");
  EXPECT_EQ(st["round"], 2);
  EXPECT_EQ(st["xi"], "0");

  st = sm.move("s1", {{"move", "00"}});
  EXPECT_EQ(st["status"]["status"], "EVE_TRACKING");
  EXPECT_EQ(sm.state("s1"), st);
}

TEST(Session, Errors) {
  SessionManager sm;
  sm.create(fixture("g_e_session.json"));
  sm.move("s1", {{"move", "1"}});
  try {
    sm.move("s1", {{"move", "01"}});
    FAIL() << "expected IllegalMove";
  } catch (const IllegalMove& e) {
    EXPECT_EQ(e.violation().clause, "extension");
    EXPECT_EQ(error_response(e).first, 400);
  }
  EXPECT_THROW(sm.move("s1", {{"move", "10"}, {"round", 5}}), NotYourTurn);
  EXPECT_THROW(sm.move("s1", {{"move", json::array()}}), IllegalMove);
  EXPECT_THROW(sm.move("s1", json::object()), BadParams);
  try {
    sm.state("s9");
    FAIL() << "expected UnknownSession";
  } catch (const UnknownSession& e) {
    EXPECT_EQ(error_response(e).first, 404);
    EXPECT_EQ(error_response(e).second["code"], "UnknownSession");
  }
  EXPECT_EQ(sm.state("s1")["history"].size(), 2u);
}

TEST(Session, BadParams) {
  SessionManager sm;
  EXPECT_THROW(sm.create({{"kind", "G_E"}, {"params", {{"covers", {"zoo:HALF"}}}}}), BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_E"}, {"human", "Eve"}, {"params", {{"covers", {"zoo:ZERO"}}}}}), BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_X"}}), BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_unfolded"}, {"human", "Eve"}, {"params", {{"tree", "zoo:COMB"}, {"ideal", "NWD"}}}}),
               BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_unfolded"}, {"params", json::object()}}), BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_pc"}, {"params", {{"decomposition", {{{"fixture", "nope"}}}}}}}), BadParams);
  EXPECT_THROW(sm.create({{"kind", "G_E"}, {"params", {{"covers", {"zoo:NOPE"}}}}}), BadParams);
}

TEST(Session, PcGame) {
  SessionManager sm;
  auto created = sm.create({{"kind", "G_pc"}, {"params", {{"decomposition", fixture("two_piece.json")}}}});
  std::string id = created["id"];
  json st;
  for (const char* w : {"0", "00", "001"}) st = sm.move(id, {{"move", w}});
  EXPECT_EQ(st["xi"], "001");
  EXPECT_EQ(st["status"], json({{"status", "EVE_AGREEING"}, {"index", 0}, {"depth", 3}}));
  EXPECT_EQ(st["oracle"], "identity");
  // the flip below 1 never agrees with the identity
  std::string other = sm.create({{"kind", "G_pc"}, {"params", {{"decomposition", fixture("two_piece.json")}}}})["id"];
  for (const char* w : {"1", "10", "101"}) st = sm.move(other, {{"move", w}});
  EXPECT_EQ(st["status"]["status"], "ADAM_PENDING");
}

TEST(Session, UnfoldedMachineAdamMovesFirst) {
  SessionManager sm;
  auto created = sm.create(fixture("g_unfolded_session.json"));
  auto st = created["state"];
  EXPECT_EQ(st["history"].size(), 1u);
  EXPECT_EQ(st["turn"], "Eve");
  EXPECT_EQ(st["tau"]["digits"], "0");
  EXPECT_EQ(st["hints"]["positive"], true);

  auto bad = json::array({"1"});
  EXPECT_THROW(sm.move(created["id"], {{"move", bad}}), IllegalMove);
  st = sm.move(created["id"], {{"move", json::array({"01"})}});
  EXPECT_EQ(st["tau"]["digits"], "01");
  EXPECT_EQ(st["columns"][0]["escaped"], true);
  EXPECT_EQ(st["clopens"][0]["pair"], json::array({0, 0}));
}

TEST(Session, UnfoldedMachineEve) {
  SessionManager sm;
  auto created = sm.create(
      {{"kind", "G_unfolded"}, {"human", "Adam"}, {"params", {{"tree", "zoo:FULL"}, {"covers", {"zoo:ZERO"}}}}});
  auto st = sm.move(created["id"], {{"move", {{"digits", "0"}}}});
  EXPECT_EQ(st["clopens"][0]["words"], json::array({"01", "1"}));
  EXPECT_EQ(st["turn"], "Adam");
}

TEST(Session, ReplayIsBitExact) {
  auto req = fixture("g_unfolded_session.json");
  Session s("a", GameKind::g_unfolded, req["params"], Player::eve);
  for (const auto& o : {json::array({"01"}), json::array({"010", "011"}), json::array({"0100"})}) s.move(o);
  auto back = Session::replay("b", GameKind::g_unfolded, req["params"], Player::eve, s.trace_jsonl());
  EXPECT_EQ(back.trace_jsonl(), s.trace_jsonl());
  EXPECT_EQ(back.length(), 7u);

  Session e("c", GameKind::g_e, {{"covers", {"zoo:AV11"}}}, Player::adam);
  for (const char* w : {"1", "10", "101", "1010"}) e.move(w);
  auto eb = Session::replay("d", GameKind::g_e, {{"covers", {"zoo:AV11"}}}, Player::adam, e.trace_jsonl());
  EXPECT_EQ(eb.trace_jsonl(), e.trace_jsonl());

  // a tampered machine move is rejected
  std::string text = e.trace_jsonl();
  auto first = text.find('\n');
  std::string second = text.substr(first + 1, text.find('\n', first + 1) - first - 1);
  json j = json::parse(second);
  j["move"] = json::array({"11"});
  std::string tampered = text.substr(0, first + 1) + j.dump() + "\n";
  EXPECT_THROW(Session::replay("e", GameKind::g_e, {{"covers", {"zoo:AV11"}}}, Player::adam, tampered), BadParams);
}

TEST(Http, Routes) {
  SessionManager sm;
  httplib::Server server;
  install_routes(server, sm);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", fixture("g_e_session.json").dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  std::string id = json::parse(created->body)["id"];

  auto st = client.Get("/sessions/" + id);
  ASSERT_TRUE(st);
  EXPECT_EQ(st->status, 200);
  EXPECT_EQ(json::parse(st->body)["kind"], "G_E");

  auto mv = client.Post("/sessions/" + id + "/moves", R"({"move":"0","round":1})", "application/json");
  ASSERT_TRUE(mv);
  EXPECT_EQ(mv->status, 200);
  EXPECT_EQ(json::parse(mv->body)["round"], 2);

  auto bad = client.Post("/sessions/" + id + "/moves", R"({"move":"11"})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto err = json::parse(bad->body);
  EXPECT_EQ(err["code"], "IllegalMove");
  EXPECT_EQ(err["clause"], "extension");

  auto turn = client.Post("/sessions/" + id + "/moves", R"({"move":"00","round":4})", "application/json");
  ASSERT_TRUE(turn);
  EXPECT_EQ(turn->status, 400);
  EXPECT_EQ(json::parse(turn->body)["code"], "NotYourTurn");

  auto garbled = client.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(garbled);
  EXPECT_EQ(garbled->status, 400);

  auto missing = client.Get("/sessions/zzz");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto trace = client.Get("/sessions/" + id + "/trace");
  ASSERT_TRUE(trace);
  EXPECT_EQ(trace->status, 200);
  EXPECT_EQ(parse_trace_jsonl<NullMove>(trace->body).size(), 2u);
  EXPECT_EQ(trace->body, sm.trace(id));

  server.stop();
  worker.join();
}

#include <chrono>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "worlds.hpp"

#include "httplib.h"
#include "json.hpp"
#include "pirogue/engine.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/steer_server.hpp"

using namespace pirogue;
using nlohmann::json;

namespace {

RunConfig month_config() {
  auto c = testing::desk_config();
  c.years = 0;
  c.months = 1;
  return c;
}

// Server on an ephemeral port with a client bound to it.
struct Harness {
  SteerServer server{month_config()};
  int port = server.start("127.0.0.1", 0);
  httplib::Client client{"127.0.0.1", port};

  Harness() { client.set_read_timeout(60, 0); }

  json post(const std::string& path, const json& body, int expected) {
    const auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expected);
    return json::parse(res->body);
  }
  json get(const std::string& path, int expected = 200) {
    const auto res = client.Get(path);
    REQUIRE(res);
    CHECK(res->status == expected);
    return json::parse(res->body);
  }
  std::string create(const json& body = json::object()) { return post("/runs", body, 201)["run_id"]; }
  json control(const std::string& id, const json& body, int expected = 200) {
    return post("/runs/" + id + "/control", body, expected);
  }
  std::vector<json> stream(const std::string& id, int from = 0) {
    const auto res = client.Get("/runs/" + id + "/stream?from=" + std::to_string(from));
    REQUIRE(res);
    CHECK(res->status == 200);
    std::vector<json> out;
    std::istringstream in(res->body);
    std::string line;
    while (std::getline(in, line)) out.push_back(json::parse(line));
    return out;
  }
  void finish(const std::string& id) {
    control(id, {{"action", "start"}});
    REQUIRE(server.sessions().get(id)->wait_until_done(std::chrono::seconds(60)));
  }
};

}  // namespace

TEST_SUITE("steer_server") {
  TEST_CASE("create, inspect and reject") {
    Harness h;
    const auto a = h.create();
    const auto b = h.create({{"seed", 7}});
    CHECK(a != b);
    const auto snap = h.get("/runs/" + a);
    CHECK(snap["status"] == "created");
    CHECK(snap["frame_count"] == 1);

    const auto bad = h.post("/runs", {{"species", "/nowhere/species.csv"}}, 422);
    CHECK(bad["fields"] == json::array({"species"}));
    const auto bad2 = h.post("/runs", {{"reproduction_per_year", 5}, {"b_crit", "x"}}, 422);
    CHECK(bad2["fields"].size() >= 1);
    CHECK(h.get("/runs/run-3", 404).contains("error"));
    const auto c = h.create();
    CHECK(c == "run-3");
    const auto res = h.client.Post("/runs", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 422);
  }

  TEST_CASE("step_day advances one day at a time") {
    Harness h;
    const auto id = h.create();
    for (int i = 0; i < 3; ++i) h.control(id, {{"action", "step_day"}});
    const auto snap = h.get("/runs/" + id);
    CHECK(snap["frame_count"] == 4);
    CHECK(snap["status"] == "paused");
    CHECK(snap["date"] == "1979-01-04");
    const auto frames = h.get("/runs/" + id + "/frames?from=1");
    REQUIRE(frames.size() == 3);
    CHECK(frames[2]["date"] == "1979-01-04");
    CHECK(frames[2]["index"] == 3);
  }

  TEST_CASE("speed zero pauses; finished runs refuse control and interventions") {
    Harness h;
    const auto id = h.create();
    h.control(id, {{"action", "set_speed"}, {"speed", 240}});
    h.control(id, {{"action", "start"}});
    const auto paused = h.control(id, {{"action", "set_speed"}, {"speed", 0}});
    CHECK(paused["status"] == "paused");
    h.control(id, {{"action", "set_speed"}, {"speed", -1}}, 422);
    h.control(id, {{"action", "fly"}}, 422);
    h.control(id, {{"action", "set_speed"}, {"speed", 1e12}});
    h.finish(id);
    CHECK(h.get("/runs/" + id)["status"] == "finished");
    h.control(id, {{"action", "start"}}, 409);
    h.post("/runs/" + id + "/interventions", {{"command", "set_site_capacity Kayar 0"}}, 409);
  }

  TEST_CASE("stream replays the backlog and ends") {
    Harness h;
    const auto id = h.create();
    for (int i = 0; i < 10; ++i) h.control(id, {{"action", "step_day"}});
    const auto session = h.server.sessions().get(id);
    const auto live = session->read_stream(0, 0, std::chrono::milliseconds(10));
    CHECK(live.messages.size() == 11);
    CHECK_FALSE(live.ended);
    h.finish(id);

    const auto first = h.stream(id);
    const auto second = h.stream(id);
    CHECK(first == second);
    REQUIRE(first.size() == 33);
    for (std::size_t k = 0; k < 32; ++k) {
      CHECK(first[k]["type"] == "frame");
      CHECK(first[k]["index"] == k);
    }
    CHECK(first.back()["type"] == "end");
    CHECK(first.back()["status"] == "finished");
    const auto tail = h.stream(id, 30);
    REQUIRE(tail.size() == 3);
    CHECK(tail[0]["index"] == 30);
  }

  TEST_CASE("server-driven frames equal the batch run") {
    Harness h;
    const auto id = h.create();
    h.control(id, {{"action", "step_day"}});
    h.finish(id);
    const auto batch = run(month_config());
    CHECK(h.server.sessions().get(id)->frames() == batch.frames);
    const auto frames = h.get("/runs/" + id + "/frames");
    REQUIRE(frames.size() == batch.frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
      CHECK(frames[k]["date"] == batch.frames[k].date);
      for (std::size_t s = 0; s < batch.site_names.size(); ++s) {
        CHECK(frames[k]["landings"][s]["site"] == batch.site_names[s]);
        CHECK(frames[k]["landings"][s]["tons"].get<double>() == batch.frames[k].landings[s]);
      }
    }
  }

  TEST_CASE("an intervention takes effect at the next day and is echoed") {
    Harness h;
    const auto id = h.create();
    for (int i = 0; i < 5; ++i) h.control(id, {{"action", "step_day"}});
    const auto ack = h.post("/runs/" + id + "/interventions", {{"command", "set_site_capacity"}, {"site", "Kayar"}, {"value", 0}}, 202);
    CHECK(ack["command"] == "set_site_capacity Kayar 0");
    CHECK(ack["effective_date"] == "1979-01-06");
    h.post("/runs/" + id + "/interventions", {{"command", "set_site_capacity Atlantis 0"}}, 422);
    h.post("/runs/" + id + "/interventions", {{"command", "scale_catchability"}, {"value", 1}}, 202);
    CHECK(h.get("/runs/" + id)["pending_interventions"] == 2);
    h.finish(id);
    CHECK(h.get("/runs/" + id)["pending_interventions"] == 0);

    const auto msgs = h.stream(id);
    std::vector<json> echoes;
    for (const auto& m : msgs)
      if (m["type"] == "intervention") echoes.push_back(m);
    REQUIRE(echoes.size() == 2);
    CHECK(echoes[0]["date"] == "1979-01-06");
    CHECK(echoes[0]["day"] == 5);
    const auto frames = h.server.sessions().get(id)->frames();
    for (const auto& f : frames)
      if (f.index >= 6) CHECK(f.landings[2] == 0.0);

    // Offline replay of the steered run.
    auto replay_cfg = month_config();
    replay_cfg.interventions = {{5, parse_intervention("set_site_capacity Kayar 0")},
                                {5, parse_intervention("scale_catchability all 1")}};
    CHECK(run(replay_cfg).frames == frames);
  }

  TEST_CASE("unknown runs and malformed requests") {
    Harness h;
    h.get("/runs/run-99", 404);
    h.control("run-99", {{"action", "start"}}, 404);
    const auto id = h.create();
    const auto res = h.client.Post("/runs/" + id + "/control", "{", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    h.get("/runs/" + id + "/frames?from=-2", 422);
  }
}

#include "pirogue/steer_server.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>

#include "httplib.h"
#include "json.hpp"

#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

using json = nlohmann::ordered_json;

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::created: return "created";
    case SessionStatus::running: return "running";
    case SessionStatus::paused: return "paused";
    case SessionStatus::finished: return "finished";
    case SessionStatus::failed: return "failed";
  }
  return "?";
}

std::optional<ControlAction> parse_control_action(std::string_view text) {
  if (text == "start") return ControlAction::start;
  if (text == "pause") return ControlAction::pause;
  if (text == "step_day") return ControlAction::step_day;
  if (text == "set_speed") return ControlAction::set_speed;
  return std::nullopt;
}

std::string frame_to_json(const MonitorFrame& f, const RunOutputs& labels) {
  json j;
  j["type"] = "frame";
  j["index"] = f.index;
  j["date"] = f.date;
  j["spin_up"] = f.spin_up;
  json landings = json::array();
  json fleet = json::array();
  for (std::size_t s = 0; s < labels.site_names.size(); ++s) {
    landings.push_back({{"site", labels.site_names[s]}, {"tons", f.landings[s]}});
    for (std::size_t c = 0; c < kCategoryCount; ++c)
      fleet.push_back({{"site", labels.site_names[s]}, {"cat", c + 1}, {"count", f.fu_count[s][c]}});
  }
  json biomass = json::array();
  for (std::size_t k = 0; k < labels.species_names.size(); ++k)
    biomass.push_back({{"species", labels.species_names[k]}, {"tons", f.biomass[k]}});
  json countries = json::array();
  for (std::size_t k = 0; k < labels.countries.size(); ++k)
    countries.push_back({{"country", labels.countries[k]}, {"tons", f.catch_by_country[k]}});
  j["landings"] = std::move(landings);
  j["fleet"] = std::move(fleet);
  j["biomass"] = std::move(biomass);
  j["catch_country"] = std::move(countries);
  j["short_migrations"] = f.short_migrations;
  j["long_migrations"] = f.long_migrations;
  return j.dump();
}

std::string intervention_to_json(const AppliedIntervention& a) {
  json j;
  j["type"] = "intervention";
  j["day"] = a.day;
  j["date"] = a.date;
  j["command"] = format_intervention(a.command);
  return j.dump();
}

namespace {
constexpr std::int64_t kEndIndex = std::numeric_limits<std::int64_t>::max();

bool terminal(SessionStatus s) { return s == SessionStatus::finished || s == SessionStatus::failed; }
}  // namespace

RunSession::RunSession(std::string id, const RunConfig& config, const WorldInputs& inputs)
    : id_(std::move(id)), sim_(std::make_unique<Simulation>(config, inputs)) {
  labels_ = sim_->outputs();
  labels_.frames.clear();
  next_date_ = sim_->world().clock.date_string();
  for (const auto& f : sim_->frames()) append_frame(f);
  sim_->set_frame_sink([this](const MonitorFrame& f) { append_frame(f); });
  sim_->set_intervention_sink([this](const AppliedIntervention& a) { append_echo(a); });
  thread_ = std::thread([this] { worker(); });
}

RunSession::~RunSession() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void RunSession::append_frame(const MonitorFrame& frame) {
  std::lock_guard lock(mu_);
  frames_.push_back(frame);
  log_.push_back({frame.index, frame_to_json(frame, labels_)});
  cv_.notify_all();
}

void RunSession::append_echo(const AppliedIntervention& applied) {
  std::lock_guard lock(mu_);
  if (pending_ > 0) --pending_;
  log_.push_back({static_cast<std::int64_t>(frames_.size()), intervention_to_json(applied)});
  cv_.notify_all();
}

void RunSession::worker() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || (!terminal(status_) && (status_ == SessionStatus::running || pending_days_ > 0)); });
    if (stop_) return;
    const bool single = status_ != SessionStatus::running;
    busy_ = true;
    lock.unlock();

    bool ended = false;
    std::string error;
    std::string date;
    {
      std::lock_guard sim_lock(sim_mu_);
      try {
        sim_->step_day();
        if (sim_->done()) {
          sim_->finish();
          ended = true;
        }
      } catch (const std::exception& e) {
        error = e.what();
        ended = true;
      }
      date = sim_->world().clock.date_string();
    }

    lock.lock();
    busy_ = false;
    next_date_ = date;
    if (single && pending_days_ > 0) --pending_days_;
    if (ended) {
      status_ = error.empty() ? SessionStatus::finished : SessionStatus::failed;
      error_ = error;
      pending_days_ = 0;
      json end = {{"type", "end"}, {"status", to_string(status_)}, {"frames", frames_.size()}};
      if (!error.empty()) end["error"] = error;
      log_.push_back({kEndIndex, end.dump()});
    }
    cv_.notify_all();
    if (!ended && status_ == SessionStatus::running && speed_ < 1e9) {
      const auto delay = std::chrono::duration<double>(24.0 / speed_);
      cv_.wait_for(lock, delay, [&] { return stop_ || status_ != SessionStatus::running; });
    }
  }
}

SessionSnapshot RunSession::snapshot() const {
  std::lock_guard lock(mu_);
  SessionSnapshot s;
  s.run_id = id_;
  s.status = status_;
  s.speed = speed_;
  s.frame_count = frames_.size();
  s.date = next_date_;
  s.pending_interventions = pending_;
  s.error = error_;
  return s;
}

SessionSnapshot RunSession::control(ControlAction action, std::optional<double> speed) {
  {
    std::unique_lock lock(mu_);
    if (terminal(status_)) throw SessionError(409, "run " + id_ + " has " + std::string(to_string(status_)));
    switch (action) {
      case ControlAction::start:
        status_ = SessionStatus::running;
        break;
      case ControlAction::set_speed:
        if (!speed || !std::isfinite(*speed) || *speed < 0.0)
          throw SessionError(422, "set_speed needs a non-negative 'speed'");
        if (*speed > 0.0) {
          speed_ = *speed;
          break;
        }
        [[fallthrough]];
      case ControlAction::pause:
        status_ = SessionStatus::paused;
        cv_.notify_all();
        cv_.wait(lock, [&] { return !busy_; });
        break;
      case ControlAction::step_day:
        if (status_ == SessionStatus::running) throw SessionError(409, "pause the run before stepping");
        status_ = SessionStatus::paused;
        ++pending_days_;
        cv_.notify_all();
        cv_.wait(lock, [&] { return (pending_days_ == 0 && !busy_) || terminal(status_); });
        break;
    }
    cv_.notify_all();
  }
  return snapshot();
}

std::string RunSession::intervene(const Intervention& cmd) {
  {
    std::lock_guard lock(mu_);
    if (terminal(status_)) throw SessionError(409, "run " + id_ + " has " + std::string(to_string(status_)));
  }
  std::string date;
  {
    std::lock_guard sim_lock(sim_mu_);
    if (sim_->finished() || sim_->done()) throw SessionError(409, "run " + id_ + " has ended");
    sim_->queue_intervention(cmd);
    date = sim_->next_effective_date();
    // Counted under the simulation lock so the echo cannot overtake it.
    std::lock_guard lock(mu_);
    ++pending_;
  }
  return date;
}

RunSession::StreamChunk RunSession::read_stream(std::size_t cursor, std::int64_t from_frame,
                                                std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return log_.size() > cursor || stop_; });
  StreamChunk chunk;
  for (std::size_t i = cursor; i < log_.size(); ++i)
    if (log_[i].frame_index >= from_frame) chunk.messages.push_back(log_[i].json);
  chunk.next_cursor = log_.size();
  chunk.ended = (terminal(status_) && !log_.empty() && log_.back().frame_index == kEndIndex) || stop_;
  return chunk;
}

std::string RunSession::frames_json(std::size_t from) const {
  std::lock_guard lock(mu_);
  std::string out = "[";
  for (std::size_t i = from; i < frames_.size(); ++i) {
    if (i > from) out += ',';
    out += frame_to_json(frames_[i], labels_);
  }
  out += ']';
  return out;
}

std::vector<MonitorFrame> RunSession::frames() const {
  std::lock_guard lock(mu_);
  return frames_;
}

bool RunSession::wait_until_done(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return terminal(status_); });
}

namespace {

// Validation failure of a create request, keeping the offending field names.
class FieldErrors : public ValidationError {
 public:
  FieldErrors(std::vector<std::string> fields, const std::string& what)
      : ValidationError(what), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_number(v.get<double>());
  throw ValidationError("expected a string or number");
}

}  // namespace

SessionManager::SessionManager(RunConfig base) : base_(std::move(base)) {}

std::string SessionManager::create_run(std::string_view body) {
  RunConfig c = base_;
  std::vector<std::string> fields;
  std::string message;
  const auto fail = [&](const std::string& field, const std::string& what) {
    fields.push_back(field);
    message += (message.empty() ? "" : "; ") + field + ": " + what;
  };
  if (!body.empty()) {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      throw FieldErrors({}, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw FieldErrors({}, "request body must be a JSON object");
    bool cleared = false;
    for (const auto& [key, value] : j.items()) {
      try {
        if (key == "intervention" && value.is_array()) {
          if (!cleared) c.interventions.clear(), cleared = true;
          for (const auto& item : value) set_config_value(c, key, value_text(item));
        } else {
          if (key == "intervention" && !cleared) c.interventions.clear(), cleared = true;
          set_config_value(c, key, value_text(value));
        }
      } catch (const ValidationError& e) {
        fail(key, e.what());
      }
    }
  }
  for (auto* p : {&c.env_dir, &c.sites_path, &c.fleet_path, &c.species_path, &c.out_dir})
    if (!p->empty() && p->is_relative()) *p = std::filesystem::absolute(*p);
  if (fields.empty()) {
    try {
      validate_run_config(c);
    } catch (const ValidationError& e) {
      fail("config", e.what());
    }
  }
  const auto must_exist = [&](const std::filesystem::path& p, const char* key) {
    if (!p.empty() && !std::filesystem::exists(p)) fail(key, "no such file or directory: " + p.string());
  };
  must_exist(c.env_dir, "env_dir");
  must_exist(c.fleet_path, "fleet");
  must_exist(c.sites_path, "sites");
  must_exist(c.species_path, "species");
  if (!fields.empty()) throw FieldErrors(fields, message);
  return create_run(c);
}

std::string SessionManager::create_run(const RunConfig& config) {
  const WorldInputs inputs = load_inputs(config);
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "run-" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<RunSession>(id, config, inputs);
  std::lock_guard lock(mu_);
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<RunSession> SessionManager::get(std::string_view id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError(404, "unknown run '" + std::string(id) + "'");
  return it->second;
}

namespace {

json snapshot_json(const SessionSnapshot& s) {
  json j;
  j["run_id"] = s.run_id;
  j["status"] = to_string(s.status);
  j["speed"] = s.speed;
  j["frame_count"] = s.frame_count;
  j["date"] = s.date;
  j["pending_interventions"] = s.pending_interventions;
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

std::string quote_site(const std::string& s) { return s.find(' ') == std::string::npos ? s : "\"" + s + "\""; }

// Either {"command": "<full text>"} or {"command": kind, "site", "category", "value", "count"}.
Intervention intervention_from_json(const json& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw ValidationError("body needs a 'command' string");
  const auto command = j["command"].get<std::string>();
  if (command.find_first_of(" \t") != std::string::npos) return parse_intervention(command);
  const auto field = [&](const char* name) {
    if (!j.contains(name)) throw ValidationError(command + ": missing field '" + name + "'");
    return value_text(j[name]);
  };
  std::string text = command;
  if (command == "set_site_capacity") text += " " + quote_site(field("site")) + " " + field("value");
  else if (command == "scale_catchability" || command == "set_campaign_prob")
    text += " " + (j.contains("category") ? field("category") : std::string("all")) + " " + field("value");
  else if (command == "add_units" || command == "remove_units")
    text += " " + quote_site(field("site")) + " " + field("category") + " " + field("count");
  return parse_intervention(text);
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const FieldErrors& e) {
    reply(res, 422, {{"error", e.what()}, {"fields", e.fields()}});
  } catch (const SessionError& e) {
    reply(res, e.http_status(), {{"error", e.what()}});
  } catch (const ValidationError& e) {
    reply(res, 422, {{"error", e.what()}});
  } catch (const json::exception& e) {
    reply(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", e.what()}});
  }
}

std::int64_t from_param(const httplib::Request& req) {
  if (!req.has_param("from")) return 0;
  const auto text = req.get_param_value("from");
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v < 0)
    throw ValidationError("'from' must be a non-negative integer");
  return v;
}

}  // namespace

struct SteerServer::Impl {
  explicit Impl(RunConfig base) : sessions(std::move(base)) {}
  SessionManager sessions;
  httplib::Server server;
  std::thread thread;
  std::atomic<bool> stopping{false};

  void routes() {
    server.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto id = sessions.create_run(req.body);
        reply(res, 201, {{"run_id", id}, {"status", "created"}});
      });
    });
    server.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 200, snapshot_json(sessions.get(req.matches[1].str())->snapshot())); });
    });
    server.Post(R"(/runs/([^/]+)/control)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto session = sessions.get(req.matches[1].str());
        const auto j = json::parse(req.body);
        if (!j.is_object() || !j.contains("action") || !j["action"].is_string())
          throw ValidationError("body needs an 'action' string");
        const auto action = parse_control_action(j["action"].get<std::string>());
        if (!action) throw ValidationError("unknown action '" + j["action"].get<std::string>() + "'");
        std::optional<double> speed;
        if (j.contains("speed")) {
          if (!j["speed"].is_number()) throw ValidationError("'speed' must be a number");
          speed = j["speed"].get<double>();
        }
        reply(res, 200, snapshot_json(session->control(*action, speed)));
      });
    });
    server.Post(R"(/runs/([^/]+)/interventions)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto session = sessions.get(req.matches[1].str());
        const auto cmd = intervention_from_json(json::parse(req.body));
        const auto date = session->intervene(cmd);
        reply(res, 202, {{"run_id", session->id()}, {"command", format_intervention(cmd)}, {"effective_date", date}});
      });
    });
    server.Get(R"(/runs/([^/]+)/frames)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto session = sessions.get(req.matches[1].str());
        res.status = 200;
        res.set_content(session->frames_json(static_cast<std::size_t>(from_param(req))), "application/json");
      });
    });
    server.Get(R"(/runs/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto session = sessions.get(req.matches[1].str());
        const auto from = from_param(req);
        auto cursor = std::make_shared<std::size_t>(0);
        res.status = 200;
        res.set_chunked_content_provider(
            "application/x-ndjson", [this, session, from, cursor](std::size_t, httplib::DataSink& sink) {
              if (stopping) return false;
              const auto chunk = session->read_stream(*cursor, from, std::chrono::milliseconds(200));
              *cursor = chunk.next_cursor;
              for (const auto& m : chunk.messages) {
                const std::string line = m + "\n";
                if (!sink.write(line.data(), line.size())) return false;
              }
              if (chunk.ended) sink.done();
              return true;
            });
      });
    });
  }
};

SteerServer::SteerServer(RunConfig base) : impl_(std::make_unique<Impl>(std::move(base))) { impl_->routes(); }

SteerServer::~SteerServer() { stop(); }

int SteerServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw ValidationError("cannot bind " + host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw ValidationError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void SteerServer::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) throw ValidationError("cannot listen on " + host + ":" + std::to_string(port));
}

void SteerServer::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

SessionManager& SteerServer::sessions() { return impl_->sessions; }

}  // namespace pirogue

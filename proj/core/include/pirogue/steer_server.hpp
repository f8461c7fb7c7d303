#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pirogue/config.hpp"
#include "pirogue/engine.hpp"

namespace pirogue {

enum class SessionStatus { created, running, paused, finished, failed };
std::string_view to_string(SessionStatus s);

enum class ControlAction { start, pause, step_day, set_speed };
std::optional<ControlAction> parse_control_action(std::string_view text);

/// Rejected lifecycle request (unknown id, illegal transition); carries an HTTP-ish status.
class SessionError : public std::runtime_error {
 public:
  SessionError(int http_status, const std::string& what) : std::runtime_error(what), status_(http_status) {}
  int http_status() const { return status_; }

 private:
  int status_;
};

/// JSON payloads shared by the HTTP API and the stream; field names follow the CSV headers.
std::string frame_to_json(const MonitorFrame& frame, const RunOutputs& labels);
std::string intervention_to_json(const AppliedIntervention& applied);

struct SessionSnapshot {
  std::string run_id;
  SessionStatus status = SessionStatus::created;
  double speed = 0.0;
  std::size_t frame_count = 0;
  std::string date;  // date of the next day to simulate
  std::size_t pending_interventions = 0;
  std::string error;
};

/**
 * @brief One steerable run: a worker thread stepping whole days.
 *
 * Lifecycle commands are honoured between days and interventions take effect
 * at the next day boundary; the
 * stream is an append-only message log (frames and intervention echoes)
 * read by any number of subscribers.
 */
class RunSession {
 public:
  RunSession(std::string id, const RunConfig& config, const WorldInputs& inputs);
  ~RunSession();
  RunSession(const RunSession&) = delete;
  RunSession& operator=(const RunSession&) = delete;

  const std::string& id() const { return id_; }
  SessionSnapshot snapshot() const;

  /// Applies a lifecycle action; pause and step_day return once the worker has complied.
  SessionSnapshot control(ControlAction action, std::optional<double> speed = {});
  /// Queues an intervention; returns the expected effective date.
  std::string intervene(const Intervention& cmd);

  /// Messages with frame index >= from_frame, starting at message cursor `cursor`.
  struct StreamChunk {
    std::vector<std::string> messages;
    std::size_t next_cursor = 0;
    bool ended = false;
  };
  /// Waits up to `timeout` for messages beyond `cursor`.
  StreamChunk read_stream(std::size_t cursor, std::int64_t from_frame, std::chrono::milliseconds timeout) const;
  /// JSON array of frames with index >= from.
  std::string frames_json(std::size_t from) const;
  std::vector<MonitorFrame> frames() const;

  /// Blocks until the session is finished or failed, or the timeout elapses.
  bool wait_until_done(std::chrono::milliseconds timeout) const;

 private:
  struct Message {
    std::int64_t frame_index;
    std::string json;
  };
  void worker();
  void append_frame(const MonitorFrame& frame);
  void append_echo(const AppliedIntervention& applied);

  std::string id_;
  std::unique_ptr<Simulation> sim_;
  RunOutputs labels_;
  std::vector<std::string> site_names_;

  std::mutex sim_mu_;  // held while the worker steps a day
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  SessionStatus status_ = SessionStatus::created;
  double speed_ = 1e9;
  int pending_days_ = 0;
  bool busy_ = false;
  bool stop_ = false;
  std::string next_date_;
  std::string error_;
  std::size_t pending_ = 0;
  std::vector<Message> log_;
  std::vector<MonitorFrame> frames_;
  std::thread thread_;
};

/// Registry of sessions created from a base config plus per-request overrides.
class SessionManager {
 public:
  explicit SessionManager(RunConfig base);

  /// Body: JSON object of config keys (values as strings or numbers) overriding
  /// the base, or empty. Throws ValidationError listing the offending fields.
  std::string create_run(std::string_view body);
  std::string create_run(const RunConfig& config);
  std::shared_ptr<RunSession> get(std::string_view id) const;  // throws SessionError(404)

 private:
  RunConfig base_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<RunSession>, std::less<>> sessions_;
  std::uint64_t next_id_ = 1;
};

/**
 * HTTP front end:
 *   POST /runs                       create (201 {"run_id","status"}; 422 on validation)
 *   GET  /runs/{id}                  snapshot
 *   POST /runs/{id}/control          {"action": start|pause|step_day|set_speed, "speed": x}
 *   POST /runs/{id}/interventions    {"command": "...", "site", "category", "value", "count"}
 *   GET  /runs/{id}/frames?from=K    JSON array backlog
 *   GET  /runs/{id}/stream?from=K    chunked NDJSON: backlog, live messages, then {"type":"end"}
 */
class SteerServer {
 public:
  explicit SteerServer(RunConfig base);
  ~SteerServer();

  /// Binds and serves on a background thread; returns the bound port (port 0 picks one).
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pirogue

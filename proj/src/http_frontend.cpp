#include "seashark/http_frontend.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>

#include "seashark/error.hpp"

namespace seashark::station {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kNdjson = "application/x-ndjson";

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  const std::string name(to_string(code));
  res.status = http_status_for(name);
  res.set_content(json{{"ok", false}, {"code", name}, {"message", message}}.dump(), kJson);
}

void send_ack(httplib::Response& res, const Ack& ack) {
  res.status = ack.ok ? 200 : http_status_for(ack.code);
  res.set_content(ack_to_json(ack).dump(), kJson);
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res, bool allow_empty) {
  if (req.body.empty()) {
    if (allow_empty) return json::object();
    send_error(res, ErrorCode::ParseError, "request body required");
    return std::nullopt;
  }
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    send_error(res, ErrorCode::ParseError, e.what());
    return std::nullopt;
  }
}

StationCommand command(CommandKind kind, const httplib::Request& req, json payload, std::string target = {}) {
  StationCommand cmd;
  cmd.kind = kind;
  cmd.request_id = req.get_header_value("X-Request-Id");
  cmd.target = std::move(target);
  cmd.payload = std::move(payload);
  return cmd;
}

}  // namespace

int http_status_for(const std::string& code) {
  if (code == "UnknownPlan" || code == "UnknownMission") return 404;
  if (code == "InvalidState" || code == "NotAtSurface" || code == "ReconstructionMissing") return 409;
  if (code == "ValidationFailed") return 422;
  if (code == "Internal") return 500;
  return 400;
}

HttpFrontend::HttpFrontend(Station& station) : station_(station), server_(std::make_unique<httplib::Server>()) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::start(const std::string& host, int port) {
  auto& srv = *server_;
  Station& st = station_;

  srv.Post("/plans", [&st](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res, false);
    if (!body) return;
    send_ack(res, st.execute(command(CommandKind::CreatePlan, req, std::move(*body))));
  });
  srv.Get(R"(/plans/([^/]+))", [&st](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(st.plan_document(req.matches[1]).dump(), kJson);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    }
  });
  srv.Post(R"(/plans/([^/]+)/validate)", [&st](const httplib::Request& req, httplib::Response& res) {
    send_ack(res, st.execute(command(CommandKind::Validate, req, json::object(), req.matches[1])));
  });
  srv.Post("/missions", [&st](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res, false);
    if (!body) return;
    send_ack(res, st.execute(command(CommandKind::Launch, req, std::move(*body))));
  });
  srv.Post(R"(/missions/([^/]+)/abort)", [&st](const httplib::Request& req, httplib::Response& res) {
    send_ack(res, st.execute(command(CommandKind::Abort, req, json::object(), req.matches[1])));
  });
  srv.Post(R"(/missions/([^/]+)/loiter)", [&st](const httplib::Request& req, httplib::Response& res) {
    send_ack(res, st.execute(command(CommandKind::Loiter, req, json::object(), req.matches[1])));
  });
  srv.Post("/backseat", [&st](const httplib::Request& req, httplib::Response& res) {
    send_ack(res, st.execute(command(CommandKind::BackseatMsg, req, json(req.body))));
  });
  srv.Post("/config", [&st](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res, false);
    if (!body) return;
    send_ack(res, st.execute(command(CommandKind::SetConfig, req, std::move(*body))));
  });

  srv.Get("/missions", [&st](const httplib::Request&, httplib::Response& res) {
    json arr = json::array();
    for (const auto& m : st.list_missions()) {
      arr.push_back(json{{"mission_id", m.mission_id},
                         {"plan_id", m.plan_id},
                         {"type", m.type},
                         {"phase", m.phase},
                         {"records", m.records},
                         {"finalized", m.finalized},
                         {"active", m.active}});
    }
    res.set_content(json{{"missions", arr}}.dump(), kJson);
  });
  srv.Get(R"(/missions/([^/]+)/log)", [&st](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(st.get_log(req.matches[1]), kNdjson);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    }
  });
  srv.Get(R"(/missions/([^/]+)/quickview)", [&st](const httplib::Request& req, httplib::Response& res) {
    try {
      if (!req.has_param("t")) throw Error(ErrorCode::ParseError, "query parameter t required");
      double t = 0.0;
      try {
        t = std::stod(req.get_param_value("t"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "t must be a number");
      }
      res.set_content(st.quickview(req.matches[1], t).dump(), kJson);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    }
  });
  srv.Get(R"(/missions/([^/]+)/export)", [&st](const httplib::Request& req, httplib::Response& res) {
    try {
      const std::string fmt_name = req.has_param("format") ? req.get_param_value("format") : "track";
      const auto format = mlog::export_format_from_string(fmt_name);
      const char* type = format == mlog::ExportFormat::GeoTrack ? "application/vnd.google-earth.kml+xml"
                         : format == mlog::ExportFormat::Records ? kNdjson
                                                                 : "text/plain";
      res.set_content(st.export_mission(req.matches[1], format), type);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    }
  });
  srv.Get("/status", [&st](const httplib::Request&, httplib::Response& res) {
    const auto s = st.stats();
    res.set_content(json{{"sim_time", st.sim_time()},
                         {"phase", st.current_phase()},
                         {"ticks", s.ticks},
                         {"subscribers", st.subscriber_count()},
                         {"tick_period", s.period},
                         {"max_tick_deviation", s.max_deviation}}
                        .dump(),
                    kJson);
  });

  srv.Get("/telemetry", [&st, stopping = stopping_](const httplib::Request& req, httplib::Response& res) {
    size_t capacity = 0;
    long max_frames = -1;
    try {
      if (req.has_param("buffer")) capacity = std::stoul(req.get_param_value("buffer"));
      if (req.has_param("max_frames")) max_frames = std::stol(req.get_param_value("max_frames"));
    } catch (const std::exception&) {
      send_error(res, ErrorCode::ParseError, "buffer and max_frames must be integers");
      return;
    }
    auto sub = st.subscribe(capacity);
    auto sent = std::make_shared<long>(0);
    res.set_chunked_content_provider(
        kNdjson,
        [sub, sent, max_frames, stopping](size_t, httplib::DataSink& sink) {
          if (stopping->load() || sub->closed() || (max_frames >= 0 && *sent >= max_frames)) {
            sink.done();
            return true;
          }
          auto frame = sub->pop(std::chrono::milliseconds(200));
          if (!sink.is_writable()) return false;
          if (frame) {
            const std::string line = telemetry_to_json(*frame).dump() + "\n";
            if (!sink.write(line.data(), line.size())) return false;
            ++*sent;
          }
          return true;
        },
        [&st, sub](bool) { st.unsubscribe(sub); });
  });

  if (port == 0) {
    port_ = srv.bind_to_any_port(host);
  } else {
    port_ = srv.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw Error(ErrorCode::InvalidParams, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpFrontend::stop() {
  stopping_->store(true);
  if (server_ && server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace seashark::station

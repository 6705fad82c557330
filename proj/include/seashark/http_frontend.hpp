#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "seashark/station.hpp"

namespace httplib {
class Server;
}

namespace seashark::station {

/// JSON-over-HTTP front end for a Station. Requests become StationCommands;
/// GET /telemetry streams NDJSON frames.
class HttpFrontend {
 public:
  explicit HttpFrontend(Station& station);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  /// Returns the bound port; throws InvalidParams when binding fails.
  int start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  Station& station_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
  std::shared_ptr<std::atomic<bool>> stopping_ = std::make_shared<std::atomic<bool>>(false);
};

/// HTTP status for an ack error code.
int http_status_for(const std::string& code);

}  // namespace seashark::station

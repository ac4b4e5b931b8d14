#pragma once

// HTTP+JSON service. Service::handle is transport-free so scripted clients
// and tests can drive it directly; serve() binds it to a listening socket.
//
// Error bodies are {"code", "message", "path"}.

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "actorlens/error.hpp"
#include "actorlens/store.hpp"

namespace actorlens {

struct Request {
  std::string method;  // GET / POST
  std::string path;    // without query string
  std::map<std::string, std::string> query;
  std::string body;    // for POST /ingest: the corpus text
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceOptions {
  ModelConfig model;
  // Called while a session's predict slot is held; lets tests hold it open.
  std::function<void(const std::string& session_id)> on_predict_start;
};

class Service {
 public:
  explicit Service(Store& store, ServiceOptions options = {});

  Response handle(const Request& request);

 private:
  Response route(const Request& request);
  Response predict(const std::string& session_id);

  Store& store_;
  ServiceOptions options_;
  std::mutex predict_mutex_;
  std::set<std::string> predicting_;
};

// HTTP status for an error code.
int http_status(ErrorCode code);

// Blocks serving on host:port until stop_server() is called. Returns false
// when the port cannot be bound.
bool serve(Service& service, const std::string& host, int port);
void stop_server();

}  // namespace actorlens

#pragma once

#include "segedit/service/service.hpp"

#include <memory>
#include <thread>

namespace httplib {
class Server;
}

namespace segedit {

/// HTTP binding of EditService:
///
///   POST /v1/sessions                       multipart: image (PNG), config (JSON, optional)
///   GET  /v1/sessions/{id}
///   POST /v1/sessions/{id}/rank             {source_prompt}
///   POST /v1/sessions/{id}/edit             {source_prompt, target_prompt, override_segment_id?}
///   POST /v1/sessions/{id}/undo             {to_step}
///   GET  /v1/sessions/{id}/steps/{k}/image  image/png
///   GET  /v1/stacks
///
/// Errors come back as {"error": message} with the ServiceError status.
class HttpServer {
  public:
    explicit HttpServer(EditService& service);
    ~HttpServer();

    HttpServer(HttpServer const&) = delete;
    HttpServer& operator=(HttpServer const&) = delete;

    // Port 0 picks a free port; returns the bound port.
    int bind(std::string const& host = "127.0.0.1", int port = 0);
    void listen();
    void start();
    void stop();
    std::string url() const;

  private:
    EditService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::string host_;
    int port_ = -1;
};

} // namespace segedit

#pragma once

#include "segedit/backends/contracts.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace segedit {

/// Serves one backend role over the model-server HTTP protocol. Used to
/// expose the reference backends to remote adapters (and in tests as a
/// loopback stub).
class BackendServer {
  public:
    explicit BackendServer(std::shared_ptr<Segmenter const> segmenter);
    explicit BackendServer(std::shared_ptr<Scorer const> scorer);
    explicit BackendServer(std::shared_ptr<Inpainter const> inpainter);
    ~BackendServer();

    BackendServer(BackendServer const&) = delete;
    BackendServer& operator=(BackendServer const&) = delete;

    // Binds to host:port (port 0 picks a free one) and returns the port.
    int bind(std::string const& host = "127.0.0.1", int port = 0);
    // Blocks serving requests until stop().
    void listen();
    // Serves on a background thread.
    void start();
    void stop();

    Role role() const { return role_; }
    std::string url() const;

  private:
    void install_routes();

    Role role_;
    std::shared_ptr<Segmenter const> segmenter_;
    std::shared_ptr<Scorer const> scorer_;
    std::shared_ptr<Inpainter const> inpainter_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::string host_;
    int port_ = -1;
};

} // namespace segedit

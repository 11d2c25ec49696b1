#include "segedit/service/http_server.hpp"

#include <httplib.h>

namespace segedit {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, json const& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(httplib::Request const& req) {
    try {
        return req.body.empty() ? json::object() : json::parse(req.body);
    } catch (json::exception const& e) {
        throw ServiceError(400, std::string("request body is not valid JSON: ") + e.what());
    }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](httplib::Request const& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (ServiceError const& e) {
            send_json(res, e.status(), {{"error", e.what()}});
        } catch (std::exception const& e) {
            send_json(res, 500, {{"error", e.what()}});
        }
    };
}

} // namespace

HttpServer::HttpServer(EditService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto& s = *server_;
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    s.Options(R"(/v1/.*)", [](httplib::Request const&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    s.Post("/v1/sessions", guarded([this](httplib::Request const& req, httplib::Response& res) {
        if (!req.is_multipart_form_data() || !req.has_file("image")) {
            throw ServiceError(400, "expected multipart/form-data with an 'image' PNG part");
        }
        auto const& file = req.get_file_value("image");
        json config = json::object();
        if (req.has_file("config")) {
            try {
                config = json::parse(req.get_file_value("config").content);
            } catch (json::exception const& e) {
                throw ServiceError(400, std::string("config part is not valid JSON: ") + e.what());
            }
        }
        auto const* bytes = reinterpret_cast<uint8_t const*>(file.content.data());
        send_json(res, 201, service_.create_session({bytes, file.content.size()}, config));
    }));

    s.Get(R"(/v1/sessions/([A-Za-z0-9_-]+))", guarded([this](httplib::Request const& req, httplib::Response& res) {
        send_json(res, 200, service_.session_summary(req.matches[1]));
    }));

    s.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/rank)",
           guarded([this](httplib::Request const& req, httplib::Response& res) {
               send_json(res, 200, service_.rank(req.matches[1], parse_body(req)));
           }));

    s.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/edit)",
           guarded([this](httplib::Request const& req, httplib::Response& res) {
               send_json(res, 200, service_.edit(req.matches[1], parse_body(req)));
           }));

    s.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/undo)",
           guarded([this](httplib::Request const& req, httplib::Response& res) {
               send_json(res, 200, service_.undo(req.matches[1], parse_body(req)));
           }));

    s.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/steps/(\d{1,9})/image)",
          guarded([this](httplib::Request const& req, httplib::Response& res) {
              auto png = service_.step_image_png(req.matches[1], std::stoul(req.matches[2]));
              res.status = 200;
              res.set_content(std::string(png.begin(), png.end()), "image/png");
          }));

    s.Get("/v1/stacks", guarded([this](httplib::Request const&, httplib::Response& res) {
        send_json(res, 200, service_.stacks());
    }));
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(std::string const& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
    } else {
        port_ = server_->bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) {
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port_;
}

void HttpServer::listen() {
    if (port_ < 0) {
        bind();
    }
    server_->listen_after_bind();
}

void HttpServer::start() {
    if (port_ < 0) {
        bind();
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void HttpServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

std::string HttpServer::url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

} // namespace segedit

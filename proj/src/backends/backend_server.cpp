#include "segedit/backends/backend_server.hpp"
#include "segedit/backends/wire.hpp"
#include "segedit/core/serialization.hpp"

#include <httplib.h>

namespace segedit {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, json const& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void handle(httplib::Request const& req, httplib::Response& res, Fn&& fn) {
    try {
        json body = json::parse(req.body);
        reply(res, 200, fn(body));
    } catch (json::exception const& e) {
        reply(res, 400, {{"error", std::string("bad request: ") + e.what()}});
    } catch (InvalidArgument const& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (DimensionMismatch const& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (MaskError const& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (ImageFormatError const& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (std::exception const& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

} // namespace

BackendServer::BackendServer(std::shared_ptr<Segmenter const> segmenter)
    : role_(Role::segmenter), segmenter_(std::move(segmenter)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

BackendServer::BackendServer(std::shared_ptr<Scorer const> scorer)
    : role_(Role::scorer), scorer_(std::move(scorer)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

BackendServer::BackendServer(std::shared_ptr<Inpainter const> inpainter)
    : role_(Role::inpainter), inpainter_(std::move(inpainter)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

BackendServer::~BackendServer() {
    stop();
}

void BackendServer::install_routes() {
    server_->Get("/health", [this](httplib::Request const&, httplib::Response& res) {
        switch (role_) {
        case Role::segmenter: reply(res, 200, wire::health(segmenter_->info())); break;
        case Role::scorer: reply(res, 200, wire::health(scorer_->info())); break;
        case Role::inpainter: reply(res, 200, wire::health(inpainter_->info())); break;
        }
    });
    switch (role_) {
    case Role::segmenter:
        server_->Post("/segment", [this](httplib::Request const& req, httplib::Response& res) {
            handle(req, res, [&](json const& body) {
                auto image = image_from_base64_png(body.at("image").get<std::string>());
                auto segments = segmenter_->segment(image, body.value("params", json::object()));
                return wire::segment_response(segments);
            });
        });
        break;
    case Role::scorer:
        server_->Post("/score", [this](httplib::Request const& req, httplib::Response& res) {
            handle(req, res, [&](json const& body) {
                std::vector<ImageBuffer> crops;
                for (auto const& c : body.at("crops")) {
                    crops.push_back(image_from_base64_png(c.get<std::string>()));
                }
                auto scores = scorer_->score(crops, body.at("prompt").get<std::string>());
                return wire::score_response(scores);
            });
        });
        break;
    case Role::inpainter:
        server_->Post("/inpaint", [this](httplib::Request const& req, httplib::Response& res) {
            handle(req, res, [&](json const& body) {
                auto image = image_from_base64_png(body.at("image").get<std::string>());
                auto mask = body.at("mask").get<Mask>();
                auto out = inpainter_->inpaint(image, mask, body.at("prompt").get<std::string>(),
                                               body.value("seed", int64_t{0}));
                return wire::inpaint_response(out);
            });
        });
        break;
    }
}

int BackendServer::bind(std::string const& host, int port) {
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

void BackendServer::listen() {
    if (port_ < 0) {
        bind();
    }
    server_->listen_after_bind();
}

void BackendServer::start() {
    if (port_ < 0) {
        bind();
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void BackendServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

std::string BackendServer::url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

} // namespace segedit

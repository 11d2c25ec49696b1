#pragma once

#include "segedit/backends/contracts.hpp"

#include <chrono>

namespace segedit {

class BackendError : public Error {
  public:
    enum class Kind { connection, timeout, protocol_violation };

    BackendError(Kind kind, Role role, std::string endpoint, std::string const& detail);

    Kind kind() const { return kind_; }
    Role role() const { return role_; }
    std::string const& endpoint() const { return endpoint_; }

  private:
    Kind kind_;
    Role role_;
    std::string endpoint_;
};

std::string_view to_string(BackendError::Kind kind);

struct RemoteEndpoint {
    std::string url; // e.g. "http://127.0.0.1:8101"
    std::chrono::duration<double> timeout{30.0};
};

// Each adapter probes GET /health on construction and rejects a role
// mismatch. Every response is checked against the role contract before it is
// returned; violations raise BackendError(protocol_violation). Calls are
// independent (one connection each), so adapters are safe to share.

class RemoteSegmenter : public Segmenter {
  public:
    // `params` are merged under any per-call params and sent with each request.
    explicit RemoteSegmenter(RemoteEndpoint endpoint, nlohmann::json params = nlohmann::json::object());
    SegmenterInfo const& info() const override { return info_; }
    std::vector<Segment> segment(ImageBuffer const& image, nlohmann::json const& params) const override;
    using Segmenter::segment;

  private:
    RemoteEndpoint endpoint_;
    nlohmann::json params_;
    SegmenterInfo info_;
};

class RemoteScorer : public Scorer {
  public:
    explicit RemoteScorer(RemoteEndpoint endpoint);
    ScorerInfo const& info() const override { return info_; }
    std::vector<double> score(std::span<ImageBuffer const> crops, std::string_view prompt) const override;

  private:
    RemoteEndpoint endpoint_;
    ScorerInfo info_;
};

class RemoteInpainter : public Inpainter {
  public:
    explicit RemoteInpainter(RemoteEndpoint endpoint);
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                        int64_t seed) const override;

  private:
    RemoteEndpoint endpoint_;
    InpainterInfo info_;
};

} // namespace segedit

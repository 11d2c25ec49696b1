#include "segedit/core/serialization.hpp"
#include "segedit/core/base64.hpp"
#include "segedit/core/error.hpp"
#include "segedit/core/png.hpp"

namespace segedit {

using nlohmann::json;

void to_json(json& j, Mask const& mask) {
    json runs = json::array();
    for (auto const& r : mask.runs()) {
        runs.push_back({r.start, r.length});
    }
    j = json{{"w", mask.width()}, {"h", mask.height()}, {"runs", std::move(runs)}};
}

void from_json(json const& j, Mask& mask) {
    if (!j.is_object()) {
        throw MaskError("mask JSON must be an object");
    }
    try {
        int w = j.at("w").get<int>();
        int h = j.at("h").get<int>();
        std::vector<Run> runs;
        for (auto const& pair : j.at("runs")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw MaskError("each run must be a [start, length] pair");
            }
            runs.push_back({pair[0].get<int64_t>(), pair[1].get<int64_t>()});
        }
        mask = Mask::from_runs(w, h, std::move(runs));
    } catch (json::exception const& e) {
        throw MaskError(std::string("malformed mask JSON: ") + e.what());
    }
}

void to_json(json& j, BBox const& box) {
    j = json::array({box.x0, box.y0, box.x1, box.y1});
}

void from_json(json const& j, BBox& box) {
    if (!j.is_array() || j.size() != 4) {
        throw Error("bbox must be [x0, y0, x1, y1]");
    }
    box = {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

void to_json(json& j, Segment const& s) {
    j = json{{"mask", s.mask},
             {"area", s.area},
             {"bbox", s.bbox},
             {"backend_score", s.backend_score},
             {"segment_id", s.segment_id}};
}

void from_json(json const& j, Segment& s) {
    s.mask = j.at("mask").get<Mask>();
    s.area = j.at("area").get<int64_t>();
    s.bbox = j.at("bbox").get<BBox>();
    s.backend_score = j.at("backend_score").get<double>();
    s.segment_id = j.at("segment_id").get<std::string>();
}

std::string image_to_base64_png(ImageBuffer const& image) {
    return base64_encode(encode_png(image));
}

ImageBuffer image_from_base64_png(std::string_view text) {
    return decode_png(base64_decode(text));
}

} // namespace segedit

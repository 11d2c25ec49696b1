#include "segedit/ranking/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace segedit {

std::string_view to_string(BackgroundMode mode) {
    return mode == BackgroundMode::blank ? "blank" : "keep";
}

BackgroundMode background_mode_from_string(std::string_view name) {
    if (name == "keep") return BackgroundMode::keep;
    if (name == "blank") return BackgroundMode::blank;
    throw InvalidArgument("background_mode must be 'keep' or 'blank'");
}

void CropSpec::validate() const {
    if (!(padding_fraction >= 0.0 && padding_fraction <= 2.0)) {
        throw InvalidArgument("padding_fraction must be in [0, 2]");
    }
}

BBox crop_region(BBox bbox, int image_width, int image_height, double padding_fraction) {
    if (bbox.empty()) {
        throw RankingError("degenerate bbox: zero width or height");
    }
    int pad = int(std::lround(padding_fraction * std::max(bbox.width(), bbox.height())));
    return {std::max(0, bbox.x0 - pad), std::max(0, bbox.y0 - pad), std::min(image_width, bbox.x1 + pad),
            std::min(image_height, bbox.y1 + pad)};
}

ImageBuffer prepare_crop(ImageBuffer const& image, Segment const& segment, CropSpec const& spec) {
    spec.validate();
    if (segment.mask.width() != image.width() || segment.mask.height() != image.height()) {
        throw DimensionMismatch("segment '" + segment.segment_id + "' does not match image dimensions");
    }
    BBox region = crop_region(segment.bbox, image.width(), image.height(), spec.padding_fraction);
    ImageBuffer out = crop(image, region);
    if (spec.background == BackgroundMode::blank) {
        Rgb const gray{128, 128, 128};
        for (int y = 0; y < out.height(); ++y) {
            for (int x = 0; x < out.width(); ++x) {
                if (!segment.mask.contains(region.x0 + x, region.y0 + y)) {
                    out.set_pixel(x, y, gray);
                }
            }
        }
    }
    return out;
}

std::vector<double> normalize_scores(std::span<double const> raw, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw InvalidArgument("temperature must be a finite value > 0");
    }
    if (raw.empty()) {
        throw RankingError("cannot normalize an empty score list");
    }
    for (double v : raw) {
        if (!std::isfinite(v)) {
            throw RankingError("scores must be finite");
        }
    }
    double const top = *std::max_element(raw.begin(), raw.end());
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = std::exp((raw[i] - top) / temperature);
    }
    double const sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) {
        v /= sum;
    }
    return out;
}

namespace {

ImageBuffer fit_to_side(ImageBuffer crop, int max_side) {
    int longest = std::max(crop.width(), crop.height());
    if (max_side <= 0 || longest <= max_side) {
        return crop;
    }
    double scale = double(max_side) / longest;
    int w = std::max(1, int(std::lround(crop.width() * scale)));
    int h = std::max(1, int(std::lround(crop.height() * scale)));
    return resize_bilinear(crop, w, h);
}

std::string segment_list(std::span<Segment const> segments) {
    std::string out;
    for (std::size_t i = 0; i < segments.size() && i < 8; ++i) {
        out += (i ? ", " : "") + segments[i].segment_id;
    }
    if (segments.size() > 8) {
        out += ", ...";
    }
    return out;
}

void check_ranking(std::span<RankedSegment const> ranked) {
    if (ranked.empty()) {
        throw RankingError("malformed ranking: empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        auto const& r = ranked[i];
        if (r.rank != int(i) + 1) {
            throw RankingError("malformed ranking: entry " + std::to_string(i) + " has rank " +
                               std::to_string(r.rank));
        }
        if (!(r.norm_score >= 0.0 && r.norm_score <= 1.0)) {
            throw RankingError("malformed ranking: norm_score outside [0, 1]");
        }
        if (i > 0 && r.norm_score > ranked[i - 1].norm_score) {
            throw RankingError("malformed ranking: norm_scores not descending");
        }
        sum += r.norm_score;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw RankingError("malformed ranking: norm_scores sum to " + std::to_string(sum));
    }
}

void check_threshold(double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("threshold must be in [0, 1]");
    }
}

} // namespace

std::vector<RankedSegment> rank_segments(ImageBuffer const& image, std::span<Segment const> segments,
                                         std::string_view source_prompt, Scorer const& scorer,
                                         CropSpec const& spec, double temperature) {
    if (segments.empty()) {
        throw RankingError("no segments to rank");
    }
    auto const first = source_prompt.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        throw RankingError("source prompt is empty");
    }
    spec.validate();

    auto const& info = scorer.info();
    std::vector<ImageBuffer> crops;
    crops.reserve(segments.size());
    for (auto const& s : segments) {
        crops.push_back(fit_to_side(prepare_crop(image, s, spec), info.max_image_side));
    }

    std::vector<double> raw;
    try {
        raw = scorer.score(crops, source_prompt);
        check_scores(raw, crops.size(), info.score_range);
    } catch (std::exception const& e) {
        throw ScoringError("scorer '" + info.name + "' failed on " + std::to_string(segments.size()) +
                           " segments [" + segment_list(segments) + "]: " + e.what());
    }
    auto norm = normalize_scores(raw, temperature);

    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (norm[a] != norm[b]) return norm[a] > norm[b];
        if (segments[a].area != segments[b].area) return segments[a].area > segments[b].area;
        return segments[a].segment_id < segments[b].segment_id;
    });

    std::vector<RankedSegment> ranked;
    ranked.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t i = order[k];
        ranked.push_back({segments[i], raw[i], norm[i], int(k) + 1});
    }
    return ranked;
}

Selection select_target(std::vector<RankedSegment> ranked, double threshold) {
    check_threshold(threshold);
    check_ranking(ranked);
    Selection sel;
    sel.threshold_used = threshold;
    if (ranked.front().norm_score >= threshold) {
        sel.selected = ranked.front();
    }
    sel.all_ranked = std::move(ranked);
    return sel;
}

Selection select_override(std::vector<RankedSegment> ranked, std::string const& segment_id, double threshold) {
    check_threshold(threshold);
    check_ranking(ranked);
    auto it = std::find_if(ranked.begin(), ranked.end(),
                           [&](RankedSegment const& r) { return r.segment.segment_id == segment_id; });
    if (it == ranked.end()) {
        throw RankingError("unknown segment_id '" + segment_id + "'");
    }
    Selection sel;
    sel.threshold_used = threshold;
    sel.selected = *it;
    sel.overridden = true;
    sel.all_ranked = std::move(ranked);
    return sel;
}

} // namespace segedit

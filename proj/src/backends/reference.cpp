#include "segedit/backends/reference.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace segedit {

namespace {

struct Hsv {
    double h; // degrees [0, 360)
    double s; // [0, 1]
    double v; // [0, 1]
};

Hsv to_hsv(Rgb p) {
    int mx = std::max({p.r, p.g, p.b});
    int mn = std::min({p.r, p.g, p.b});
    double delta = mx - mn;
    Hsv out{0.0, mx == 0 ? 0.0 : delta / mx, mx / 255.0};
    if (delta > 0) {
        double h;
        if (mx == p.r) {
            h = 60.0 * std::fmod((p.g - p.b) / delta, 6.0);
        } else if (mx == p.g) {
            h = 60.0 * ((p.b - p.r) / delta + 2.0);
        } else {
            h = 60.0 * ((p.r - p.g) / delta + 4.0);
        }
        out.h = h < 0 ? h + 360.0 : h;
    }
    return out;
}

constexpr double kAchromaticSat = 0.2;
constexpr double kDarkValue = 0.2;
constexpr double kBrightValue = 0.8;

struct LexiconEntry {
    std::string_view word;
    LexiconColor color;
    Rgb rgb;
};

constexpr std::array<LexiconEntry, 10> kLexicon{{
    {"red", LexiconColor::red, {255, 0, 0}},
    {"green", LexiconColor::green, {0, 255, 0}},
    {"blue", LexiconColor::blue, {0, 0, 255}},
    {"yellow", LexiconColor::yellow, {255, 255, 0}},
    {"white", LexiconColor::white, {255, 255, 255}},
    {"black", LexiconColor::black, {0, 0, 0}},
    {"gray", LexiconColor::gray, {128, 128, 128}},
    {"orange", LexiconColor::orange, {255, 165, 0}},
    {"purple", LexiconColor::purple, {128, 0, 128}},
    {"cyan", LexiconColor::cyan, {0, 255, 255}},
}};

void check_params(ReferenceSegmenterParams const& p) {
    if (p.quant_levels < 2 || p.quant_levels > 256) {
        throw InvalidArgument("quant_levels must be in [2, 256]");
    }
    if (!(p.min_area_fraction >= 0.0 && p.min_area_fraction < 1.0)) {
        throw InvalidArgument("min_area_fraction must be in [0, 1)");
    }
}

} // namespace

std::optional<LexiconColor> lexicon_color(std::string_view word) {
    for (auto const& e : kLexicon) {
        if (e.word == word) {
            return e.color;
        }
    }
    return std::nullopt;
}

Rgb lexicon_rgb(LexiconColor color) {
    return kLexicon[std::size_t(color)].rgb;
}

bool matches_color(LexiconColor color, Rgb pixel) {
    Hsv c = to_hsv(pixel);
    bool const achromatic = c.s < kAchromaticSat;
    bool const dark = c.v < kDarkValue;
    switch (color) {
    case LexiconColor::black: return dark;
    case LexiconColor::white: return !dark && achromatic && c.v > kBrightValue;
    case LexiconColor::gray: return !dark && achromatic && c.v <= kBrightValue;
    default: break;
    }
    if (dark || achromatic) {
        return false;
    }
    switch (color) {
    case LexiconColor::red: return c.h < 15.0 || c.h >= 345.0;
    case LexiconColor::orange: return c.h >= 15.0 && c.h < 45.0;
    case LexiconColor::yellow: return c.h >= 45.0 && c.h < 70.0;
    case LexiconColor::green: return c.h >= 70.0 && c.h < 165.0;
    case LexiconColor::cyan: return c.h >= 165.0 && c.h < 195.0;
    case LexiconColor::blue: return c.h >= 195.0 && c.h < 255.0;
    case LexiconColor::purple: return c.h >= 255.0 && c.h < 345.0;
    default: return false;
    }
}

std::vector<std::string> tokenize_prompt(std::string_view prompt) {
    std::vector<std::string> words;
    std::string current;
    for (char ch : prompt) {
        auto u = static_cast<unsigned char>(ch);
        if (u >= 0x80 || std::isalnum(u)) {
            current.push_back(char(std::tolower(u)));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    return words;
}

std::vector<Segment> reference_segment(ImageBuffer const& image, ReferenceSegmenterParams const& params) {
    check_params(params);
    int const w = image.width();
    int const h = image.height();
    std::size_t const n = image.pixel_count();
    int const q = params.quant_levels;

    std::vector<uint32_t> key(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rgb p = image.pixel_at(i);
        key[i] = uint32_t(p.r * q / 256) << 16 | uint32_t(p.g * q / 256) << 8 | uint32_t(p.b * q / 256);
    }

    // Flood fill in raster order; labels are assigned by first pixel.
    constexpr uint32_t unlabeled = ~0u;
    std::vector<uint32_t> label(n, unlabeled);
    std::vector<std::vector<int64_t>> members;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (label[seed] != unlabeled) {
            continue;
        }
        auto id = uint32_t(members.size());
        members.emplace_back();
        label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            members[id].push_back(int64_t(i));
            int x = int(i % w);
            int y = int(i / w);
            auto visit = [&](std::size_t j) {
                if (label[j] == unlabeled && key[j] == key[i]) {
                    label[j] = id;
                    stack.push_back(j);
                }
            };
            if (x > 0) visit(i - 1);
            if (x + 1 < w) visit(i + 1);
            if (y > 0) visit(i - w);
            if (y + 1 < h) visit(i + w);
        }
    }

    double const min_area = params.min_area_fraction * double(n);
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (double(members[c].size()) >= min_area) {
            kept.push_back(c);
        }
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [&](std::size_t a, std::size_t b) { return members[a].size() > members[b].size(); });

    std::vector<Segment> segments;
    segments.reserve(kept.size());
    for (std::size_t rank = 0; rank < kept.size(); ++rank) {
        auto& pix = members[kept[rank]];
        std::sort(pix.begin(), pix.end());
        std::vector<Run> runs;
        for (int64_t p : pix) {
            if (!runs.empty() && runs.back().start + runs.back().length == p) {
                ++runs.back().length;
            } else {
                runs.push_back({p, 1});
            }
        }
        char id[32];
        std::snprintf(id, sizeof id, "seg-%04zu", rank);
        segments.push_back(make_segment(Mask::from_runs(w, h, std::move(runs)), double(pix.size()) / double(n), id));
    }
    return segments;
}

std::vector<double> reference_score(std::span<ImageBuffer const> crops, std::string_view prompt) {
    if (crops.empty()) {
        throw InvalidArgument("reference scorer needs at least one crop");
    }
    std::vector<LexiconColor> colors;
    for (auto const& word : tokenize_prompt(prompt)) {
        if (auto c = lexicon_color(word)) {
            colors.push_back(*c);
        }
    }
    std::vector<double> scores;
    scores.reserve(crops.size());
    for (auto const& crop : crops) {
        double total = 0.0;
        for (auto color : colors) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < crop.pixel_count(); ++i) {
                hits += matches_color(color, crop.pixel_at(i)) ? 1 : 0;
            }
            total += double(hits) / double(crop.pixel_count());
        }
        scores.push_back(total);
    }
    return scores;
}

ImageBuffer reference_inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt, int64_t) {
    if (mask.width() != image.width() || mask.height() != image.height()) {
        throw DimensionMismatch("inpaint mask does not match image dimensions");
    }
    if (mask.empty()) {
        return image;
    }
    std::optional<Rgb> fill;
    for (auto const& word : tokenize_prompt(prompt)) {
        if (auto c = lexicon_color(word)) {
            fill = lexicon_rgb(*c);
            break;
        }
    }
    if (!fill) {
        Mask ring = mask_subtract(dilate_mask(mask, 1), mask);
        if (ring.empty()) {
            fill = Rgb{128, 128, 128};
        } else {
            std::array<uint64_t, 3> sum{};
            for (auto const& r : ring.runs()) {
                for (int64_t i = r.start; i < r.start + r.length; ++i) {
                    Rgb p = image.pixel_at(std::size_t(i));
                    sum[0] += p.r;
                    sum[1] += p.g;
                    sum[2] += p.b;
                }
            }
            auto area = double(ring.area());
            auto mean = [&](uint64_t s) { return uint8_t(std::lround(double(s) / area)); };
            fill = Rgb{mean(sum[0]), mean(sum[1]), mean(sum[2])};
        }
    }
    ImageBuffer out = image;
    for (auto const& r : mask.runs()) {
        for (int64_t i = r.start; i < r.start + r.length; ++i) {
            out.set_pixel_at(std::size_t(i), *fill);
        }
    }
    return out;
}

ReferenceSegmenter::ReferenceSegmenter(ReferenceSegmenterParams params)
    : params_(params), info_{"reference-quantized-components", 0, false} {
    check_params(params_);
}

std::vector<Segment> ReferenceSegmenter::segment(ImageBuffer const& image, nlohmann::json const& params) const {
    ReferenceSegmenterParams p = params_;
    if (params.is_object()) {
        p.quant_levels = params.value("quant_levels", p.quant_levels);
        p.min_area_fraction = params.value("min_area_fraction", p.min_area_fraction);
    }
    return reference_segment(image, p);
}

ReferenceScorer::ReferenceScorer() : info_{"reference-color-lexicon", ScoreRange::raw_logit, {"en"}, 0} {}

std::vector<double> ReferenceScorer::score(std::span<ImageBuffer const> crops, std::string_view prompt) const {
    return reference_score(crops, prompt);
}

ReferenceInpainter::ReferenceInpainter() : info_{"reference-flat-fill", 0, true, false} {}

ImageBuffer ReferenceInpainter::inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                                        int64_t seed) const {
    return reference_inpaint(image, mask, prompt, seed);
}

BackendStack make_reference_stack(std::string stack_id, ReferenceSegmenterParams params) {
    return {std::move(stack_id), std::make_shared<ReferenceSegmenter>(params), std::make_shared<ReferenceScorer>(),
            std::make_shared<ReferenceInpainter>()};
}

} // namespace segedit

#include "segedit/core/mask.hpp"
#include "segedit/core/error.hpp"

#include <algorithm>
#include <string>

namespace segedit {

Bitmap::Bitmap(int w, int h) : width(w), height(h), bits(std::size_t(w) * std::size_t(h), 0) {
    if (w < 1 || h < 1) {
        throw InvalidArgument("bitmap dimensions must be at least 1x1");
    }
}

Bitmap::Bitmap(int w, int h, std::vector<uint8_t> values) : width(w), height(h), bits(std::move(values)) {
    if (w < 1 || h < 1) {
        throw InvalidArgument("bitmap dimensions must be at least 1x1");
    }
    if (bits.size() != std::size_t(w) * std::size_t(h)) {
        throw InvalidArgument("bitmap value count does not match dimensions");
    }
    for (auto& b : bits) {
        b = b ? 1 : 0;
    }
}

Mask::Mask(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("mask dimensions must be at least 1x1");
    }
}

Mask::Mask(int width, int height, std::vector<Run> runs)
    : width_(width), height_(height), runs_(std::move(runs)) {}

Mask Mask::from_runs(int width, int height, std::vector<Run> runs) {
    if (width < 1 || height < 1) {
        throw MaskError("mask dimensions must be at least 1x1");
    }
    int64_t const total = int64_t(width) * height;
    int64_t prev_end = -1;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto const& r = runs[i];
        auto where = " (run " + std::to_string(i) + ")";
        if (r.length < 1) {
            throw MaskError("run length must be >= 1" + where);
        }
        if (r.start < 0 || r.start + r.length > total) {
            throw MaskError("run exceeds the " + std::to_string(width) + "x" + std::to_string(height) +
                            " grid" + where);
        }
        if (prev_end >= 0 && r.start <= prev_end) {
            throw MaskError(r.start < prev_end ? "runs overlap or are unsorted" + where
                                               : "adjacent runs must be merged" + where);
        }
        prev_end = r.start + r.length;
    }
    return Mask(width, height, std::move(runs));
}

int64_t Mask::area() const {
    int64_t sum = 0;
    for (auto const& r : runs_) {
        sum += r.length;
    }
    return sum;
}

bool Mask::contains(int64_t flat) const {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), flat,
                               [](int64_t v, Run const& r) { return v < r.start; });
    if (it == runs_.begin()) {
        return false;
    }
    --it;
    return flat < it->start + it->length;
}

Mask rle_encode(Bitmap const& bitmap) {
    if (bitmap.width < 1 || bitmap.height < 1) {
        throw InvalidArgument("bitmap dimensions must be at least 1x1");
    }
    std::vector<Run> runs;
    int64_t const n = int64_t(bitmap.bits.size());
    int64_t i = 0;
    while (i < n) {
        if (!bitmap.bits[i]) {
            ++i;
            continue;
        }
        int64_t start = i;
        while (i < n && bitmap.bits[i]) {
            ++i;
        }
        runs.push_back({start, i - start});
    }
    return Mask(bitmap.width, bitmap.height, std::move(runs));
}

Bitmap rle_decode(Mask const& mask) {
    // Masks built through the public API are canonical; re-check anyway since
    // decode is the boundary every consumer reads through.
    auto checked = Mask::from_runs(mask.width(), mask.height(), {mask.runs().begin(), mask.runs().end()});
    Bitmap out(checked.width(), checked.height());
    for (auto const& r : checked.runs()) {
        std::fill_n(out.bits.begin() + r.start, r.length, uint8_t{1});
    }
    return out;
}

int64_t intersection_area(Mask const& a, Mask const& b) {
    if (!a.same_size(b)) {
        throw DimensionMismatch("mask dimensions differ: " + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
    }
    auto ra = a.runs();
    auto rb = b.runs();
    std::size_t i = 0, j = 0;
    int64_t total = 0;
    while (i < ra.size() && j < rb.size()) {
        int64_t lo = std::max(ra[i].start, rb[j].start);
        int64_t ea = ra[i].start + ra[i].length;
        int64_t eb = rb[j].start + rb[j].length;
        int64_t hi = std::min(ea, eb);
        if (hi > lo) {
            total += hi - lo;
        }
        if (ea < eb) {
            ++i;
        } else {
            ++j;
        }
    }
    return total;
}

double mask_iou(Mask const& a, Mask const& b) {
    int64_t inter = intersection_area(a, b);
    int64_t uni = a.area() + b.area() - inter;
    if (uni == 0) {
        return 1.0;
    }
    return double(inter) / double(uni);
}

Mask dilate_mask(Mask const& mask, int radius) {
    if (radius < 0) {
        throw InvalidArgument("dilation radius must be >= 0");
    }
    if (radius == 0 || mask.empty()) {
        return mask;
    }
    int const w = mask.width();
    int const h = mask.height();

    // Horizontal pass straight from the runs: each row segment grows by r.
    Bitmap horiz(w, h);
    for (auto const& r : mask.runs()) {
        int64_t pos = r.start;
        int64_t end = r.start + r.length;
        while (pos < end) {
            int y = int(pos / w);
            int x0 = int(pos % w);
            int64_t row_end = std::min<int64_t>(end, int64_t(y + 1) * w);
            int x1 = int(row_end - int64_t(y) * w); // exclusive
            int lo = std::max(0, x0 - radius);
            int hi = std::min(w, x1 + radius);
            std::fill(horiz.bits.begin() + std::size_t(y) * w + lo, horiz.bits.begin() + std::size_t(y) * w + hi,
                      uint8_t{1});
            pos = row_end;
        }
    }

    // Vertical pass with a per-column prefix count.
    Bitmap out(w, h);
    std::vector<int> prefix(std::size_t(h) + 1);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            prefix[y + 1] = prefix[y] + horiz.at(x, y);
        }
        for (int y = 0; y < h; ++y) {
            int lo = std::max(0, y - radius);
            int hi = std::min(h, y + radius + 1);
            out.at(x, y) = prefix[hi] - prefix[lo] > 0 ? 1 : 0;
        }
    }
    return rle_encode(out);
}

Mask mask_subtract(Mask const& a, Mask const& b) {
    if (!a.same_size(b)) {
        throw DimensionMismatch("mask dimensions differ");
    }
    auto bits = rle_decode(a);
    for (auto const& r : b.runs()) {
        std::fill_n(bits.bits.begin() + r.start, r.length, uint8_t{0});
    }
    return rle_encode(bits);
}

bool is_subset(Mask const& inner, Mask const& outer) {
    return intersection_area(inner, outer) == inner.area();
}

BBox bounding_box(Mask const& mask) {
    if (mask.empty()) {
        return {};
    }
    int const w = mask.width();
    int x0 = w, x1 = 0;
    auto runs = mask.runs();
    int y0 = int(runs.front().start / w);
    int y1 = int((runs.back().start + runs.back().length - 1) / w) + 1;
    for (auto const& r : runs) {
        int64_t last = r.start + r.length - 1;
        int ry0 = int(r.start / w);
        int ry1 = int(last / w);
        if (ry0 != ry1) {
            // A run that wraps a row touches both the last and first column.
            x0 = 0;
            x1 = w;
        } else {
            x0 = std::min(x0, int(r.start % w));
            x1 = std::max(x1, int(last % w) + 1);
        }
    }
    return {x0, y0, x1, y1};
}

} // namespace segedit

#pragma once

#include "segedit/core/image.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace segedit {

struct Run {
    int64_t start = 0;
    int64_t length = 0;

    friend bool operator==(Run const&, Run const&) = default;
};

// Dense binary grid, one byte per pixel (0 or 1), row-major.
struct Bitmap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    Bitmap() = default;
    Bitmap(int w, int h);
    Bitmap(int w, int h, std::vector<uint8_t> values);

    uint8_t at(int x, int y) const { return bits[std::size_t(y) * width + x]; }
    uint8_t& at(int x, int y) { return bits[std::size_t(y) * width + x]; }

    friend bool operator==(Bitmap const&, Bitmap const&) = default;
};

/// Binary region stored as canonical run-length encoding over the row-major
/// flattened grid. Runs are sorted, each has length >= 1, and consecutive
/// runs are separated by at least one unset pixel.
class Mask {
  public:
    Mask() = default;
    // Empty mask of the given size.
    Mask(int width, int height);

    // Validates canonical form; throws MaskError otherwise.
    static Mask from_runs(int width, int height, std::vector<Run> runs);

    int width() const { return width_; }
    int height() const { return height_; }
    int64_t pixel_count() const { return int64_t(width_) * height_; }
    std::span<Run const> runs() const { return runs_; }

    int64_t area() const;
    bool empty() const { return runs_.empty(); }
    bool contains(int64_t flat) const;
    bool contains(int x, int y) const { return contains(int64_t(y) * width_ + x); }
    bool same_size(Mask const& o) const { return width_ == o.width_ && height_ == o.height_; }

    friend bool operator==(Mask const&, Mask const&) = default;

  private:
    Mask(int width, int height, std::vector<Run> runs);
    friend Mask rle_encode(Bitmap const&);

    int width_ = 0;
    int height_ = 0;
    std::vector<Run> runs_;
};

Mask rle_encode(Bitmap const& bitmap);
Bitmap rle_decode(Mask const& mask);

// |a ∩ b| / |a ∪ b|; two empty masks count as identical (1.0).
double mask_iou(Mask const& a, Mask const& b);
int64_t intersection_area(Mask const& a, Mask const& b);

// Square (2r+1)x(2r+1) structuring element, clipped to the grid.
Mask dilate_mask(Mask const& mask, int radius);

Mask mask_subtract(Mask const& a, Mask const& b);
bool is_subset(Mask const& inner, Mask const& outer);

// Tight half-open bounding box; empty box for an empty mask.
BBox bounding_box(Mask const& mask);

} // namespace segedit

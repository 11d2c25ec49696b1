#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace segedit {

struct Rgb {
    uint8_t r = 0;
    uint8_t g = 0;
    uint8_t b = 0;

    friend bool operator==(Rgb, Rgb) = default;
};

// Half-open pixel rectangle: x0 <= x < x1, y0 <= y < y1.
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    friend bool operator==(BBox const&, BBox const&) = default;
};

/// 8-bit RGB image, row-major, interleaved channels.
///
/// A default-constructed buffer is the null image (0x0); every other
/// instance has width and height >= 1 and exactly width*height*3 bytes.
class ImageBuffer {
  public:
    static constexpr int channels = 3;

    ImageBuffer() = default;
    ImageBuffer(int width, int height, Rgb fill = {});
    ImageBuffer(int width, int height, std::vector<uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0; }
    std::size_t pixel_count() const { return std::size_t(width_) * std::size_t(height_); }

    std::span<uint8_t const> data() const { return data_; }
    std::span<uint8_t> data() { return data_; }

    Rgb pixel(int x, int y) const {
        auto const* p = &data_[offset(x, y)];
        return {p[0], p[1], p[2]};
    }
    void set_pixel(int x, int y, Rgb c) {
        auto* p = &data_[offset(x, y)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }
    Rgb pixel_at(std::size_t flat) const {
        auto const* p = &data_[flat * channels];
        return {p[0], p[1], p[2]};
    }
    void set_pixel_at(std::size_t flat, Rgb c) {
        auto* p = &data_[flat * channels];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    bool same_size(ImageBuffer const& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(ImageBuffer const&, ImageBuffer const&) = default;

  private:
    std::size_t offset(int x, int y) const {
        return (std::size_t(y) * std::size_t(width_) + std::size_t(x)) * channels;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

// Copies the pixels inside `region`, which must lie within the image.
ImageBuffer crop(ImageBuffer const& image, BBox region);

// Bilinear resampling with pixel-center alignment.
ImageBuffer resize_bilinear(ImageBuffer const& image, int width, int height);

} // namespace segedit

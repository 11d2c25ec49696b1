#include "segedit/core/image.hpp"
#include "segedit/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace segedit {

namespace {

void check_extent(int width, int height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be at least 1x1, got " + std::to_string(width) +
                              "x" + std::to_string(height));
    }
}

} // namespace

ImageBuffer::ImageBuffer(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_extent(width, height);
    data_.resize(pixel_count() * channels);
    for (std::size_t i = 0; i < pixel_count(); ++i) {
        set_pixel_at(i, fill);
    }
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_extent(width, height);
    if (data_.size() != pixel_count() * channels) {
        throw InvalidArgument("image data has " + std::to_string(data_.size()) + " bytes, expected " +
                              std::to_string(pixel_count() * channels));
    }
}

ImageBuffer crop(ImageBuffer const& image, BBox region) {
    if (region.empty() || region.x0 < 0 || region.y0 < 0 || region.x1 > image.width() ||
        region.y1 > image.height()) {
        throw InvalidArgument("crop region outside image bounds");
    }
    ImageBuffer out(region.width(), region.height());
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            out.set_pixel(x, y, image.pixel(region.x0 + x, region.y0 + y));
        }
    }
    return out;
}

ImageBuffer resize_bilinear(ImageBuffer const& image, int width, int height) {
    ImageBuffer out(width, height);
    if (image.width() == width && image.height() == height) {
        return image;
    }
    double const sx = double(image.width()) / width;
    double const sy = double(image.height()) / height;
    auto const src = image.data();
    auto dst = out.data();
    for (int y = 0; y < height; ++y) {
        double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(image.height() - 1));
        int y0 = int(fy);
        int y1 = std::min(y0 + 1, image.height() - 1);
        double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(image.width() - 1));
            int x0 = int(fx);
            int x1 = std::min(x0 + 1, image.width() - 1);
            double wx = fx - x0;
            for (int c = 0; c < ImageBuffer::channels; ++c) {
                auto at = [&](int px, int py) {
                    return double(src[(std::size_t(py) * image.width() + px) * 3 + c]);
                };
                double top = at(x0, y0) * (1 - wx) + at(x1, y0) * wx;
                double bottom = at(x0, y1) * (1 - wx) + at(x1, y1) * wx;
                double v = top * (1 - wy) + bottom * wy;
                dst[(std::size_t(y) * width + x) * 3 + c] = uint8_t(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

} // namespace segedit

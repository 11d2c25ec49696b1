#include "segedit/core/png.hpp"
#include "segedit/core/error.hpp"

#include <png.h>

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>

namespace segedit {

namespace {

struct PngImage {
    png_image image{};
    PngImage() {
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(PngImage const&) = delete;
    PngImage& operator=(PngImage const&) = delete;
};

} // namespace

std::vector<uint8_t> encode_png(ImageBuffer const& image) {
    if (image.empty()) {
        throw InvalidArgument("cannot encode an empty image");
    }
    PngImage png;
    png.image.width = png_uint_32(image.width());
    png.image.height = png_uint_32(image.height());
    png.image.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, image.data().data(), 0, nullptr)) {
        throw ImageFormatError(std::string("png encode failed: ") + png.image.message);
    }
    std::vector<uint8_t> out(size);
    if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, image.data().data(), 0, nullptr)) {
        throw ImageFormatError(std::string("png encode failed: ") + png.image.message);
    }
    out.resize(size);
    return out;
}

ImageBuffer decode_png(std::span<uint8_t const> bytes) {
    PngImage png;
    if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
        throw ImageFormatError(std::string("png decode failed: ") + png.image.message);
    }
    bool const had_alpha = (png.image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    int const w = int(png.image.width);
    int const h = int(png.image.height);
    // Read as RGBA so alpha is dropped rather than composited.
    png.image.format = PNG_FORMAT_RGBA;
    std::vector<uint8_t> rgba(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, rgba.data(), 0, nullptr)) {
        throw ImageFormatError(std::string("png decode failed: ") + png.image.message);
    }
    if (had_alpha) {
        std::clog << "warning: dropping alpha channel from " << w << "x" << h << " input image\n";
    }
    std::vector<uint8_t> rgb(std::size_t(w) * h * 3);
    for (std::size_t i = 0, n = std::size_t(w) * h; i < n; ++i) {
        rgb[i * 3 + 0] = rgba[i * 4 + 0];
        rgb[i * 3 + 1] = rgba[i * 4 + 1];
        rgb[i * 3 + 2] = rgba[i * 4 + 2];
    }
    return ImageBuffer(w, h, std::move(rgb));
}

ImageBuffer read_png_file(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageFormatError("cannot open " + path.string());
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

void write_png_file(std::filesystem::path const& path, ImageBuffer const& image) {
    auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<char const*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

} // namespace segedit

#include "support/fixtures.hpp"

#include <segedit/core/base64.hpp>
#include <segedit/core/composite.hpp>
#include <segedit/core/error.hpp>
#include <segedit/core/png.hpp>
#include <segedit/core/serialization.hpp>

#include <doctest.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace segedit;
using namespace segedit::testing;

namespace {

Bitmap grid(int w, int h, std::vector<uint8_t> values) {
    return Bitmap(w, h, std::move(values));
}

// Brute force: a pixel is set when any set pixel lies within Chebyshev distance r.
Bitmap dilate_oracle(Bitmap const& b, int r) {
    Bitmap out(b.width, b.height);
    for (int y = 0; y < b.height; ++y) {
        for (int x = 0; x < b.width; ++x) {
            for (int yy = std::max(0, y - r); yy <= std::min(b.height - 1, y + r) && !out.at(x, y); ++yy) {
                for (int xx = std::max(0, x - r); xx <= std::min(b.width - 1, x + r); ++xx) {
                    if (b.at(xx, yy)) {
                        out.at(x, y) = 1;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

// Brute force: Chebyshev distance from (x, y) to the nearest unset pixel.
int depth_oracle(Bitmap const& b, int x, int y) {
    int best = std::numeric_limits<int>::max();
    for (int yy = 0; yy < b.height; ++yy) {
        for (int xx = 0; xx < b.width; ++xx) {
            if (!b.at(xx, yy)) {
                best = std::min(best, std::max(std::abs(xx - x), std::abs(yy - y)));
            }
        }
    }
    return best;
}

} // namespace

TEST_SUITE("rle") {
    TEST_CASE("encode flattens row-major and merges runs") {
        CHECK(rle_encode(grid(2, 2, {1, 0, 0, 1})).runs().size() == 2);
        auto m = rle_encode(grid(2, 2, {1, 0, 0, 1}));
        CHECK(std::vector<Run>(m.runs().begin(), m.runs().end()) == std::vector<Run>{{0, 1}, {3, 1}});
        CHECK(rle_encode(Bitmap(3, 3)).runs().empty());
        auto full = rle_encode(grid(2, 3, {1, 1, 1, 1, 1, 1}));
        CHECK(std::vector<Run>(full.runs().begin(), full.runs().end()) == std::vector<Run>{{0, 6}});
    }

    TEST_CASE("decode inverts the examples") {
        auto m = Mask::from_runs(2, 2, {{0, 1}, {3, 1}});
        CHECK(rle_decode(m) == grid(2, 2, {1, 0, 0, 1}));
        CHECK(rle_decode(Mask::from_runs(4, 4, {})) == Bitmap(4, 4));
    }

    TEST_CASE("malformed runs are rejected") {
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{0, 2}, {1, 1}}), MaskError);  // overlap
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{0, 1}, {1, 1}}), MaskError);  // adjacent, unmerged
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{2, 1}, {0, 1}}), MaskError);  // unsorted
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{0, 0}}), MaskError);          // zero length
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{3, 2}}), MaskError);          // past the end
        CHECK_THROWS_AS(Mask::from_runs(4, 1, {{-1, 1}}), MaskError);
        CHECK_THROWS_AS(Mask::from_runs(0, 1, {}), MaskError);
        CHECK_NOTHROW(Mask::from_runs(4, 1, {{0, 1}, {2, 2}}));
    }

    TEST_CASE("round trip on random grids") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> side(1, 48);
        std::uniform_real_distribution<double> density(0.0, 1.0);
        for (int i = 0; i < 300; ++i) {
            auto b = random_bitmap(rng, side(rng), side(rng), density(rng));
            auto m = rle_encode(b);
            REQUIRE(rle_decode(m) == b);
            REQUIRE(rle_encode(rle_decode(m)) == m);
            auto area = std::count(b.bits.begin(), b.bits.end(), uint8_t{1});
            REQUIRE(m.area() == area);
        }
    }

    TEST_CASE("contains agrees with the bitmap") {
        std::mt19937 rng(11);
        auto b = random_bitmap(rng, 17, 9, 0.4);
        auto m = rle_encode(b);
        for (int y = 0; y < 9; ++y) {
            for (int x = 0; x < 17; ++x) {
                REQUIRE(m.contains(x, y) == bool(b.at(x, y)));
            }
        }
    }
}

TEST_SUITE("mask algebra") {
    TEST_CASE("iou examples") {
        auto a = rle_encode(grid(4, 1, {1, 1, 0, 0}));
        auto b = rle_encode(grid(4, 1, {0, 1, 1, 0}));
        CHECK(mask_iou(a, b) == doctest::Approx(1.0 / 3.0));
        CHECK(mask_iou(a, a) == 1.0);
        CHECK(mask_iou(a, rle_encode(grid(4, 1, {0, 0, 1, 1}))) == 0.0);
        CHECK(mask_iou(Mask(4, 1), Mask(4, 1)) == 1.0);
        CHECK_THROWS_AS(mask_iou(Mask(4, 1), Mask(2, 2)), DimensionMismatch);
    }

    TEST_CASE("iou matches a bitmap count and is symmetric") {
        std::mt19937 rng(3);
        for (int i = 0; i < 200; ++i) {
            auto ba = random_bitmap(rng, 13, 7, 0.3);
            auto bb = random_bitmap(rng, 13, 7, 0.5);
            int inter = 0, uni = 0;
            for (std::size_t k = 0; k < ba.bits.size(); ++k) {
                inter += ba.bits[k] & bb.bits[k];
                uni += ba.bits[k] | bb.bits[k];
            }
            auto a = rle_encode(ba);
            auto b = rle_encode(bb);
            double expected = uni == 0 ? 1.0 : double(inter) / uni;
            REQUIRE(mask_iou(a, b) == doctest::Approx(expected));
            REQUIRE(mask_iou(a, b) == mask_iou(b, a));
        }
    }

    TEST_CASE("dilation examples") {
        auto dot = mask_where(5, 5, [](int x, int y) { return x == 2 && y == 2; });
        CHECK(dilate_mask(dot, 0) == dot);
        auto block = mask_where(5, 5, [](int x, int y) { return x >= 1 && x <= 3 && y >= 1 && y <= 3; });
        CHECK(dilate_mask(dot, 1) == block);
        auto corner = mask_where(5, 5, [](int x, int y) { return x == 0 && y == 0; });
        CHECK(dilate_mask(corner, 1) == mask_where(5, 5, [](int x, int y) { return x <= 1 && y <= 1; }));
        CHECK_THROWS_AS(dilate_mask(dot, -1), InvalidArgument);
    }

    TEST_CASE("dilation matches brute force and is monotone") {
        std::mt19937 rng(5);
        for (int i = 0; i < 60; ++i) {
            auto b = random_bitmap(rng, 19, 11, 0.05);
            auto m = rle_encode(b);
            Mask prev = m;
            for (int r = 0; r <= 4; ++r) {
                auto d = dilate_mask(m, r);
                REQUIRE(rle_decode(d) == dilate_oracle(b, r));
                REQUIRE(is_subset(prev, d));
                prev = d;
            }
        }
    }

    TEST_CASE("bounding box is tight") {
        std::mt19937 rng(9);
        for (int i = 0; i < 100; ++i) {
            auto b = random_bitmap(rng, 12, 10, 0.03);
            BBox expected{12, 10, 0, 0};
            bool any = false;
            for (int y = 0; y < 10; ++y) {
                for (int x = 0; x < 12; ++x) {
                    if (b.at(x, y)) {
                        any = true;
                        expected = {std::min(expected.x0, x), std::min(expected.y0, y), std::max(expected.x1, x + 1),
                                    std::max(expected.y1, y + 1)};
                    }
                }
            }
            REQUIRE(bounding_box(rle_encode(b)) == (any ? expected : BBox{}));
        }
        // A run that wraps across rows spans every column.
        CHECK(bounding_box(Mask::from_runs(4, 3, {{3, 2}})) == BBox{0, 0, 4, 2});
    }

    TEST_CASE("subtract") {
        auto a = rle_encode(grid(4, 1, {1, 1, 1, 0}));
        auto b = rle_encode(grid(4, 1, {0, 1, 0, 1}));
        CHECK(mask_subtract(a, b) == rle_encode(grid(4, 1, {1, 0, 1, 0})));
    }
}

TEST_SUITE("segment") {
    TEST_CASE("make_segment derives area and bbox") {
        auto m = mask_where(8, 8, [](int x, int y) { return x >= 2 && x < 5 && y >= 1 && y < 3; });
        auto s = make_segment(m, 0.5, "s");
        CHECK(s.area == 6);
        CHECK(s.bbox == BBox{2, 1, 5, 3});
        CHECK_NOTHROW(validate_segment(s, 8, 8));
        auto bad = s;
        bad.area = 5;
        CHECK_THROWS_AS(validate_segment(bad, 8, 8), Error);
        bad = s;
        bad.bbox.x1 = 6;
        CHECK_THROWS_AS(validate_segment(bad, 8, 8), Error);
        bad = s;
        bad.backend_score = 1.5;
        CHECK_THROWS_AS(validate_segment(bad, 8, 8), Error);
        CHECK_THROWS_AS(validate_segment(s, 8, 9), Error);
    }
}

TEST_SUITE("composite") {
    TEST_CASE("empty and full masks") {
        std::mt19937 rng(1);
        auto orig = random_image(rng, 9, 7);
        auto gen = random_image(rng, 9, 7);
        CHECK(composite(orig, gen, Mask(9, 7), 0) == orig);
        CHECK(composite(orig, gen, Mask(9, 7), 3) == orig);
        auto full = Mask::from_runs(9, 7, {{0, 63}});
        CHECK(composite(orig, gen, full, 0) == gen);
        CHECK(composite(orig, gen, full, 2) == gen); // no boundary inside the image
    }

    TEST_CASE("half-plane mask, hard switch, per-pixel oracle") {
        std::mt19937 rng(2);
        auto orig = random_image(rng, 16, 10);
        auto gen = random_image(rng, 16, 10);
        auto left = mask_where(16, 10, [](int x, int) { return x < 8; });
        auto out = composite(orig, gen, left, 0);
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 16; ++x) {
                REQUIRE(out.pixel(x, y) == (x < 8 ? gen.pixel(x, y) : orig.pixel(x, y)));
            }
        }
    }

    TEST_CASE("feathered alpha matches a brute-force distance oracle") {
        std::mt19937 rng(4);
        auto orig = random_image(rng, 14, 12);
        auto gen = random_image(rng, 14, 12);
        auto bits = random_bitmap(rng, 14, 12, 0.6);
        auto mask = rle_encode(bits);
        for (int feather : {1, 2, 3}) {
            auto out = composite(orig, gen, mask, feather);
            for (int y = 0; y < 12; ++y) {
                for (int x = 0; x < 14; ++x) {
                    if (!bits.at(x, y)) {
                        REQUIRE(out.pixel(x, y) == orig.pixel(x, y));
                        continue;
                    }
                    double alpha = std::min(1.0, double(depth_oracle(bits, x, y)) / feather);
                    Rgb o = orig.pixel(x, y), g = gen.pixel(x, y), r = out.pixel(x, y);
                    auto blend = [&](uint8_t a, uint8_t b) { return uint8_t(std::lround(a + alpha * (b - a))); };
                    REQUIRE(r == Rgb{blend(o.r, g.r), blend(o.g, g.g), blend(o.b, g.b)});
                }
            }
        }
    }

    TEST_CASE("locality and idempotence over random inputs") {
        std::mt19937 rng(6);
        for (int i = 0; i < 50; ++i) {
            auto orig = random_image(rng, 11, 8);
            auto gen = random_image(rng, 11, 8);
            auto bits = random_bitmap(rng, 11, 8, 0.3);
            auto mask = rle_encode(bits);
            auto out = composite(orig, gen, mask, 0);
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 11; ++x) {
                    if (!bits.at(x, y)) {
                        REQUIRE(out.pixel(x, y) == orig.pixel(x, y));
                    }
                }
            }
            for (int f = 0; f < 4; ++f) {
                REQUIRE(composite(orig, orig, mask, f) == orig);
            }
        }
    }

    TEST_CASE("dimension mismatch") {
        CHECK_THROWS_AS(composite(ImageBuffer(4, 4), ImageBuffer(4, 5), Mask(4, 4), 0), DimensionMismatch);
        CHECK_THROWS_AS(composite(ImageBuffer(4, 4), ImageBuffer(4, 4), Mask(3, 4), 0), DimensionMismatch);
    }
}

TEST_SUITE("image") {
    TEST_CASE("construction invariants") {
        CHECK_THROWS_AS(ImageBuffer(0, 3), InvalidArgument);
        CHECK_THROWS_AS(ImageBuffer(2, 2, std::vector<uint8_t>(11)), InvalidArgument);
        ImageBuffer img(3, 2, Rgb{1, 2, 3});
        CHECK(img.data().size() == 18);
        CHECK(img.pixel(2, 1) == Rgb{1, 2, 3});
    }

    TEST_CASE("crop and resize") {
        std::mt19937 rng(8);
        auto img = random_image(rng, 10, 6);
        auto c = crop(img, {2, 1, 5, 4});
        CHECK(c.width() == 3);
        CHECK(c.pixel(0, 0) == img.pixel(2, 1));
        CHECK(resize_bilinear(img, 10, 6) == img);
        auto uniform = ImageBuffer(20, 20, Rgb{40, 80, 120});
        CHECK(resize_bilinear(uniform, 7, 5) == ImageBuffer(7, 5, Rgb{40, 80, 120}));
        CHECK_THROWS_AS(crop(img, {0, 0, 11, 2}), InvalidArgument);
    }
}

TEST_SUITE("codecs") {
    TEST_CASE("png round trip is lossless") {
        std::mt19937 rng(10);
        auto img = random_image(rng, 23, 17);
        auto bytes = encode_png(img);
        CHECK(decode_png(bytes) == img);
    }

    TEST_CASE("png alpha is dropped, not composited") {
        png_image png{};
        png.version = PNG_IMAGE_VERSION;
        png.width = 2;
        png.height = 1;
        png.format = PNG_FORMAT_RGBA;
        std::vector<uint8_t> rgba{10, 20, 30, 0, 200, 100, 50, 128};
        png_alloc_size_t size = 0;
        REQUIRE(png_image_write_to_memory(&png, nullptr, &size, 0, rgba.data(), 0, nullptr));
        std::vector<uint8_t> bytes(size);
        REQUIRE(png_image_write_to_memory(&png, bytes.data(), &size, 0, rgba.data(), 0, nullptr));
        auto img = decode_png(bytes);
        CHECK(img.pixel(0, 0) == Rgb{10, 20, 30});
        CHECK(img.pixel(1, 0) == Rgb{200, 100, 50});
    }

    TEST_CASE("png decode rejects garbage") {
        std::vector<uint8_t> junk{1, 2, 3, 4, 5};
        CHECK_THROWS_AS(decode_png(junk), ImageFormatError);
    }

    TEST_CASE("base64") {
        for (std::string s : {"", "f", "fo", "foo", "foob", "fooba", "foobar"}) {
            std::vector<uint8_t> bytes(s.begin(), s.end());
            REQUIRE(base64_decode(base64_encode(bytes)) == bytes);
        }
        std::vector<uint8_t> foobar{'f', 'o', 'o', 'b', 'a', 'r'};
        CHECK(base64_encode(foobar) == "Zm9vYmFy");
        CHECK_THROWS_AS(base64_decode("abc"), ImageFormatError);
        CHECK_THROWS_AS(base64_decode("ab!="), ImageFormatError);
    }

    TEST_CASE("mask json wire form") {
        auto m = Mask::from_runs(2, 2, {{0, 1}, {3, 1}});
        nlohmann::json j = m;
        CHECK(j == nlohmann::json::parse(R"({"w":2,"h":2,"runs":[[0,1],[3,1]]})"));
        CHECK(j.get<Mask>() == m);
        CHECK_THROWS_AS(nlohmann::json::parse(R"({"w":2,"h":2,"runs":[[0,2],[1,1]]})").get<Mask>(), MaskError);
        CHECK_THROWS_AS(nlohmann::json::parse(R"({"w":2,"runs":[]})").get<Mask>(), MaskError);
        CHECK_THROWS_AS(nlohmann::json::parse(R"({"w":2,"h":2,"runs":[[0]]})").get<Mask>(), MaskError);
    }

    TEST_CASE("segment json round trip") {
        auto s = make_segment(Mask::from_runs(3, 3, {{4, 2}}), 0.25, "seg-7");
        nlohmann::json j = s;
        CHECK(j.get<Segment>() == s);
    }
}

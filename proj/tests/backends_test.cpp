#include "support/fixtures.hpp"

#include <segedit/backends/reference.hpp>
#include <segedit/backends/registry.hpp>

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace segedit;
using namespace segedit::testing;
using nlohmann::json;

namespace {

ImageBuffer stripes(int w, int h, int red_columns) {
    ImageBuffer img(w, h, kWhite);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < red_columns; ++x) {
            img.set_pixel(x, y, kRed);
        }
    }
    return img;
}

} // namespace

TEST_SUITE("reference segmenter") {
    TEST_CASE("uniform image is one segment") {
        auto segs = reference_segment(ImageBuffer(12, 9, Rgb{30, 140, 90}), {});
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].area == 108);
        CHECK(segs[0].bbox == BBox{0, 0, 12, 9});
        CHECK(segs[0].backend_score == 1.0);
        CHECK(segs[0].segment_id == "seg-0000");
    }

    TEST_CASE("red disk splits into disk and background") {
        auto disk = red_disk();
        auto segs = reference_segment(red_disk_fixture(), {4, 0.0});
        REQUIRE(segs.size() == 2);
        int64_t disk_pixels = 0;
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                disk_pixels += disk.contains(x, y) ? 1 : 0;
            }
        }
        // Background is larger, so the disk comes second.
        CHECK(segs[1].area == disk_pixels);
        CHECK(segs[1].mask == mask_where(64, 64, [&](int x, int y) { return disk.contains(x, y); }));
        CHECK(segs[0].area == 64 * 64 - disk_pixels);
    }

    TEST_CASE("checkerboard falls below the area threshold") {
        CHECK(reference_segment(checkerboard(8), {4, 0.5}).empty());
        CHECK(reference_segment(checkerboard(8), {4, 0.0}).size() == 64);
    }

    TEST_CASE("invalid params") {
        CHECK_THROWS_AS(reference_segment(checkerboard(4), {1, 0.0}), InvalidArgument);
        CHECK_THROWS_AS(reference_segment(checkerboard(4), {4, 1.0}), InvalidArgument);
        CHECK_THROWS_AS(reference_segment(checkerboard(4), {4, -0.1}), InvalidArgument);
    }

    TEST_CASE("segments are disjoint, cover the grid and are sorted") {
        std::mt19937 rng(21);
        for (int i = 0; i < 20; ++i) {
            auto img = random_image(rng, 16, 12);
            auto segs = reference_segment(img, {2, 0.0});
            CHECK_NOTHROW(check_segments(segs, 16, 12, false));
            int64_t total = 0;
            for (std::size_t k = 0; k < segs.size(); ++k) {
                total += segs[k].area;
                if (k > 0) {
                    REQUIRE(segs[k - 1].area >= segs[k].area);
                }
            }
            REQUIRE(total == 16 * 12);
            REQUIRE(reference_segment(img, {2, 0.0}) == segs);
        }
    }

    TEST_CASE("params json overrides defaults") {
        ReferenceSegmenter seg;
        auto img = checkerboard(8);
        CHECK(seg.segment(img, json{{"min_area_fraction", 0.5}}).empty());
        CHECK(seg.segment(img).size() == 64);
    }
}

TEST_SUITE("reference scorer") {
    TEST_CASE("examples") {
        std::vector<ImageBuffer> red{ImageBuffer(4, 4, kRed)};
        CHECK(reference_score(red, "red") == std::vector<double>{1.0});
        std::vector<ImageBuffer> two{ImageBuffer(4, 4, kRed), ImageBuffer(4, 4, kBlue)};
        CHECK(reference_score(two, "red") == std::vector<double>{1.0, 0.0});
        CHECK(reference_score(two, "a thing") == std::vector<double>{0.0, 0.0});
        CHECK(reference_score(two, "RED, blue!") == std::vector<double>{1.0, 1.0});
    }

    TEST_CASE("partial coverage counts matching pixels") {
        std::vector<ImageBuffer> crops{stripes(10, 5, 4)};
        int hits = 0;
        for (std::size_t i = 0; i < crops[0].pixel_count(); ++i) {
            hits += matches_color(LexiconColor::red, crops[0].pixel_at(i)) ? 1 : 0;
        }
        auto scores = reference_score(crops, "red ball");
        CHECK(scores[0] == doctest::Approx(double(hits) / 50.0));
        CHECK(scores[0] == doctest::Approx(0.4));
    }

    TEST_CASE("empty crop list is an error") {
        CHECK_THROWS_AS(reference_score({}, "red"), InvalidArgument);
    }

    TEST_CASE("permutation equivariance") {
        std::mt19937 rng(17);
        std::vector<ImageBuffer> crops;
        for (int i = 0; i < 6; ++i) {
            crops.push_back(random_image(rng, 5 + i, 4));
        }
        auto base = reference_score(crops, "red green");
        std::vector<std::size_t> perm(crops.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (int t = 0; t < 10; ++t) {
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<ImageBuffer> shuffled;
            for (auto p : perm) {
                shuffled.push_back(crops[p]);
            }
            auto s = reference_score(shuffled, "red green");
            for (std::size_t k = 0; k < perm.size(); ++k) {
                REQUIRE(s[k] == base[perm[k]]);
            }
        }
    }

    TEST_CASE("lexicon classes are mutually exclusive") {
        std::mt19937 rng(23);
        std::uniform_int_distribution<int> byte(0, 255);
        std::array all{LexiconColor::red,   LexiconColor::green, LexiconColor::blue,   LexiconColor::yellow,
                       LexiconColor::white, LexiconColor::black, LexiconColor::gray,   LexiconColor::orange,
                       LexiconColor::purple, LexiconColor::cyan};
        for (int i = 0; i < 5000; ++i) {
            Rgb p{uint8_t(byte(rng)), uint8_t(byte(rng)), uint8_t(byte(rng))};
            int n = 0;
            for (auto c : all) {
                n += matches_color(c, p) ? 1 : 0;
            }
            REQUIRE(n == 1);
        }
        for (auto c : all) {
            CHECK(matches_color(c, lexicon_rgb(c)));
        }
        CHECK(lexicon_color("blue") == LexiconColor::blue);
        CHECK(!lexicon_color("ball"));
    }
}

TEST_SUITE("reference inpainter") {
    TEST_CASE("color prompt fills with lexicon color") {
        auto img = red_disk_fixture();
        auto mask = mask_where(64, 64, [](int x, int y) { return x > 10 && x < 20 && y > 5 && y < 50; });
        auto out = reference_inpaint(img, mask, "blue", 0);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                REQUIRE(out.pixel(x, y) == (mask.contains(x, y) ? kBlue : img.pixel(x, y)));
            }
        }
    }

    TEST_CASE("no color word uses the surrounding ring") {
        ImageBuffer img(20, 20, kWhite);
        auto mask = mask_where(20, 20, [](int x, int y) { return x >= 5 && x < 9 && y >= 5 && y < 9; });
        for (int y = 5; y < 9; ++y) {
            for (int x = 5; x < 9; ++x) {
                img.set_pixel(x, y, kRed);
            }
        }
        CHECK(reference_inpaint(img, mask, "a dragon", 0) == ImageBuffer(20, 20, kWhite));
    }

    TEST_CASE("empty mask is bit-exact identity, seed ignored") {
        std::mt19937 rng(29);
        auto img = random_image(rng, 9, 9);
        CHECK(reference_inpaint(img, Mask(9, 9), "blue", 5) == img);
        auto mask = mask_where(9, 9, [](int x, int) { return x < 3; });
        CHECK(reference_inpaint(img, mask, "sky", 1) == reference_inpaint(img, mask, "sky", 99));
    }

    TEST_CASE("outside pixels preserved on random inputs") {
        std::mt19937 rng(31);
        for (int i = 0; i < 20; ++i) {
            auto img = random_image(rng, 10, 8);
            auto bits = random_bitmap(rng, 10, 8, 0.3);
            auto out = reference_inpaint(img, rle_encode(bits), "purple", 0);
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 10; ++x) {
                    if (!bits.at(x, y)) {
                        REQUIRE(out.pixel(x, y) == img.pixel(x, y));
                    }
                }
            }
        }
    }
}

TEST_SUITE("contracts") {
    TEST_CASE("segment checks") {
        auto a = make_segment(mask_where(4, 4, [](int x, int) { return x < 2; }), 0.5, "a");
        auto b = make_segment(mask_where(4, 4, [](int x, int) { return x >= 1; }), 0.5, "b");
        std::vector<Segment> overlap{a, b};
        CHECK_THROWS_AS(check_segments(overlap, 4, 4, false), ContractViolation);
        CHECK_NOTHROW(check_segments(overlap, 4, 4, true));
        std::vector<Segment> dup{a, a};
        CHECK_THROWS_AS(check_segments(dup, 4, 4, true), ContractViolation);
        CHECK_THROWS_AS(check_segments(std::vector<Segment>{a}, 5, 4, true), ContractViolation);
    }

    TEST_CASE("score checks") {
        std::vector<double> ok{0.5, 2.0};
        CHECK_NOTHROW(check_scores(ok, 2, ScoreRange::raw_logit));
        CHECK_THROWS_AS(check_scores(ok, 2, ScoreRange::unit_interval), ContractViolation);
        CHECK_THROWS_AS(check_scores(ok, 3, ScoreRange::raw_logit), ContractViolation);
        std::vector<double> nan{std::nan("")};
        CHECK_THROWS_AS(check_scores(nan, 1, ScoreRange::raw_logit), ContractViolation);
    }

    TEST_CASE("inpaint checks") {
        CHECK_THROWS_AS(check_inpaint_result(ImageBuffer(3, 3), ImageBuffer(4, 3)), ContractViolation);
        CHECK_NOTHROW(check_inpaint_result(ImageBuffer(3, 3), ImageBuffer(3, 3)));
    }
}

TEST_SUITE("registry") {
    TEST_CASE("reference registry") {
        auto r = BackendRegistry::with_reference();
        CHECK(r.ids() == std::vector<std::string>{"reference"});
        CHECK(r.get("reference").segmenter->info().name != "");
        CHECK_THROWS_AS(r.get("nope"), UnknownStack);
        CHECK_THROWS_AS(r.add(make_reference_stack()), InvalidArgument);
        auto incomplete = make_reference_stack("half");
        incomplete.scorer.reset();
        CHECK_THROWS_AS(r.add(incomplete), InvalidArgument);
        r.add(make_reference_stack("second"));
        CHECK(r.contains("second"));
        CHECK(r.describe().size() == 2);
    }

    TEST_CASE("from json") {
        auto cfg = json::parse(R"([{"stack_id": "coarse",
            "segmenter": {"kind": "reference", "quant_levels": 2, "min_area_fraction": 0.5},
            "scorer": {"kind": "reference"}, "inpainter": {"kind": "reference"}}])");
        auto r = BackendRegistry::from_json(cfg);
        CHECK(r.get("coarse").segmenter->segment(checkerboard(8)).empty());
        CHECK_THROWS_AS(BackendRegistry::from_json(json::object()), InvalidArgument);
        CHECK_THROWS_AS(BackendRegistry::from_json(json::parse(R"([{"stack_id": "x",
            "segmenter": {"kind": "magic"}, "scorer": {"kind": "reference"},
            "inpainter": {"kind": "reference"}}])")),
                        InvalidArgument);
        CHECK_THROWS_AS(BackendRegistry::from_json(json::parse(R"([{"segmenter": {}}])")), InvalidArgument);
    }
}

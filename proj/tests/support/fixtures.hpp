#pragma once

#include <segedit/backends/contracts.hpp>
#include <segedit/core/mask.hpp>
#include <segedit/pipeline/instruction.hpp>

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <span>
#include <vector>

namespace segedit::testing {

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kBlue{0, 0, 255};
inline constexpr Rgb kYellow{255, 255, 0};
inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};

struct Disk {
    int cx;
    int cy;
    int radius;
    Rgb color;

    bool contains(int x, int y) const {
        int dx = x - cx;
        int dy = y - cy;
        return dx * dx + dy * dy <= radius * radius;
    }
};

ImageBuffer paint_disks(int width, int height, Rgb background, std::span<Disk const> disks);

// Red disk, radius 10, centered in a 64x64 white image.
Disk red_disk();
ImageBuffer red_disk_fixture();

// Red disk and green disk, well apart, on 64x64 white.
std::vector<Disk> two_disks();
ImageBuffer two_disk_fixture();

// White background with 1-3 non-overlapping disks in distinct primary colors.
ImageBuffer random_disk_scene(std::mt19937& rng, int width, int height);

// n x n board of 1-pixel black/white cells.
ImageBuffer checkerboard(int n);

Bitmap random_bitmap(std::mt19937& rng, int width, int height, double density);
ImageBuffer random_image(std::mt19937& rng, int width, int height);

// Mask of pixels for which `inside(x, y)` holds, built pixel by pixel.
Mask mask_where(int width, int height, std::function<bool(int, int)> const& inside);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(std::string const& tag);

// Scripts the parser must reject, with where and why.
struct MalformedScript {
    std::string text;
    int line;
    int column;
    ParseError::Kind kind;
    std::string expected;
};
std::vector<MalformedScript> const& malformed_scripts();

// Test doubles.

class ThrowingSegmenter : public Segmenter {
  public:
    SegmenterInfo const& info() const override { return info_; }
    std::vector<Segment> segment(ImageBuffer const&, nlohmann::json const&) const override;
    using Segmenter::segment;

  private:
    SegmenterInfo info_{"throwing", 0, false};
};

class FixedScorer : public Scorer {
  public:
    explicit FixedScorer(std::vector<double> scores, int max_side = 0);
    ScorerInfo const& info() const override { return info_; }
    std::vector<double> score(std::span<ImageBuffer const> crops, std::string_view prompt) const override;

    mutable std::vector<std::pair<int, int>> seen_sizes;

  private:
    std::vector<double> scores_;
    ScorerInfo info_;
};

class ThrowingInpainter : public Inpainter {
  public:
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const&, Mask const&, std::string_view, int64_t) const override;

  private:
    InpainterInfo info_{"throwing", 0, true, false};
};

// Returns an image one pixel too wide.
class WrongSizeInpainter : public Inpainter {
  public:
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const& image, Mask const&, std::string_view, int64_t) const override;

  private:
    InpainterInfo info_{"wrong-size", 0, true, false};
};

// Reference inpainting that records every seed it receives.
class SeedRecordingInpainter : public Inpainter {
  public:
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                        int64_t seed) const override;

    mutable std::vector<int64_t> seeds;

  private:
    InpainterInfo info_{"seed-recording", 0, true, true};
};

// Reference inpainting that blocks until released, so a test can hold an
// edit in flight.
class GatedInpainter : public Inpainter {
  public:
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                        int64_t seed) const override;

    // Waits until some call is inside inpaint(); false on timeout.
    bool wait_entered(std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) const;
    void release() const;

  private:
    InpainterInfo info_{"gated", 0, true, false};
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    mutable bool entered_ = false;
    mutable bool released_ = false;
};

} // namespace segedit::testing

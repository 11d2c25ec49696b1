#include "support/fixtures.hpp"

#include <segedit/backends/reference.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <unistd.h>
#include <stdexcept>

namespace segedit::testing {

ImageBuffer paint_disks(int width, int height, Rgb background, std::span<Disk const> disks) {
    ImageBuffer img(width, height, background);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (auto const& d : disks) {
                if (d.contains(x, y)) {
                    img.set_pixel(x, y, d.color);
                }
            }
        }
    }
    return img;
}

Disk red_disk() {
    return {32, 32, 10, kRed};
}

ImageBuffer red_disk_fixture() {
    Disk d = red_disk();
    return paint_disks(64, 64, kWhite, {&d, 1});
}

std::vector<Disk> two_disks() {
    return {{18, 20, 9, kRed}, {46, 44, 9, kGreen}};
}

ImageBuffer two_disk_fixture() {
    auto disks = two_disks();
    return paint_disks(64, 64, kWhite, disks);
}

ImageBuffer checkerboard(int n) {
    ImageBuffer img(n, n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            img.set_pixel(x, y, (x + y) % 2 ? kBlack : kWhite);
        }
    }
    return img;
}

Bitmap random_bitmap(std::mt19937& rng, int width, int height, double density) {
    std::bernoulli_distribution bit(density);
    Bitmap b(width, height);
    for (auto& v : b.bits) {
        v = bit(rng) ? 1 : 0;
    }
    return b;
}

ImageBuffer random_image(std::mt19937& rng, int width, int height) {
    std::uniform_int_distribution<int> byte(0, 255);
    ImageBuffer img(width, height);
    for (auto& v : img.data()) {
        v = uint8_t(byte(rng));
    }
    return img;
}

Mask mask_where(int width, int height, std::function<bool(int, int)> const& inside) {
    Bitmap b(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            b.at(x, y) = inside(x, y) ? 1 : 0;
        }
    }
    return rle_encode(b);
}

std::filesystem::path temp_dir(std::string const& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("segedit-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<Segment> ThrowingSegmenter::segment(ImageBuffer const&, nlohmann::json const&) const {
    throw std::runtime_error("segmenter exploded");
}

FixedScorer::FixedScorer(std::vector<double> scores, int max_side)
    : scores_(std::move(scores)), info_{"fixed", ScoreRange::raw_logit, {"en"}, max_side} {}

std::vector<double> FixedScorer::score(std::span<ImageBuffer const> crops, std::string_view) const {
    for (auto const& c : crops) {
        seen_sizes.emplace_back(c.width(), c.height());
    }
    return {scores_.begin(), scores_.begin() + std::ptrdiff_t(std::min(scores_.size(), crops.size()))};
}

ImageBuffer ThrowingInpainter::inpaint(ImageBuffer const&, Mask const&, std::string_view, int64_t) const {
    throw std::runtime_error("inpainter exploded");
}

ImageBuffer WrongSizeInpainter::inpaint(ImageBuffer const& image, Mask const&, std::string_view, int64_t) const {
    return ImageBuffer(image.width() + 1, image.height());
}

ImageBuffer SeedRecordingInpainter::inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                                            int64_t seed) const {
    seeds.push_back(seed);
    return reference_inpaint(image, mask, prompt, seed);
}

std::vector<MalformedScript> const& malformed_scripts() {
    using K = ParseError::Kind;
    static std::vector<MalformedScript> const scripts{
        {"replace X with", 1, 15, K::syntax, "target phrase"},
        {"replace with b", 1, 9, K::syntax, "source phrase"},
        {"replace a b", 1, 12, K::syntax, "'with'"},
        {"swap a with b", 1, 1, K::syntax, "'replace'"},
        {"replace a with b; ; replace c with d", 1, 19, K::empty_clause, "'replace'"},
        {"; replace a with b", 1, 1, K::empty_clause, "'replace'"},
        {"   \n  ", 2, 3, K::empty_clause, "'replace'"},
        {"replace a with b with c", 1, 18, K::syntax, "';' or end of input"},
        // Without the ';' the second clause runs into the first target phrase.
        {"replace a with b\nreplace c with d", 2, 11, K::syntax, "';' or end of input"},
        {"replace 猫 with; replace 狗 with 鸟", 1, 15, K::syntax, "target phrase"},
        {"replace a with b;\n  replace c", 2, 12, K::syntax, "'with'"},
        {"replace \xff with b", 1, 9, K::syntax, "valid UTF-8 text"},
        {"replace a\twith b;;", 1, 18, K::empty_clause, "'replace'"},
    };
    return scripts;
}

ImageBuffer random_disk_scene(std::mt19937& rng, int width, int height) {
    std::array<Rgb, 4> palette{kRed, kGreen, kBlue, kYellow};
    std::shuffle(palette.begin(), palette.end(), rng);
    int count = 1 + int(rng() % 3);
    int const max_r = std::max(3, std::min(width, height) / 6);
    std::vector<Disk> disks;
    for (int attempt = 0; attempt < 200 && int(disks.size()) < count; ++attempt) {
        int r = 3 + int(rng() % (max_r - 2));
        if (2 * r + 2 >= width || 2 * r + 2 >= height) {
            continue;
        }
        Disk d{r + 1 + int(rng() % (width - 2 * r - 2)), r + 1 + int(rng() % (height - 2 * r - 2)), r,
               palette[disks.size()]};
        bool clear = std::all_of(disks.begin(), disks.end(), [&](Disk const& o) {
            int dx = o.cx - d.cx, dy = o.cy - d.cy, gap = o.radius + d.radius + 2;
            return dx * dx + dy * dy > gap * gap;
        });
        if (clear) {
            disks.push_back(d);
        }
    }
    return paint_disks(width, height, kWhite, disks);
}

ImageBuffer GatedInpainter::inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                                    int64_t seed) const {
    std::unique_lock lock(mutex_);
    entered_ = true;
    cv_.notify_all();
    cv_.wait(lock, [this] { return released_; });
    return reference_inpaint(image, mask, prompt, seed);
}

bool GatedInpainter::wait_entered(std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [this] { return entered_; });
}

void GatedInpainter::release() const {
    std::lock_guard lock(mutex_);
    released_ = true;
    cv_.notify_all();
}

} // namespace segedit::testing

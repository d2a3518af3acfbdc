#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace potsynth {

/// Binary drawing: 1 = black/profile, 0 = white/background. Row index grows
/// downward, column index grows rightward.
class Bitmap {
public:
    Bitmap() = default;
    Bitmap(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
    void set(int row, int col, std::uint8_t value) { pixels_[index(row, col)] = value ? 1 : 0; }

    bool operator==(const Bitmap&) const = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Interleaved 8-bit RGB image.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {0, 0, 0});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return width_ == 0 || height_ == 0; }

    Rgb at(int row, int col) const {
        const std::uint8_t* p = &data_[index(row, col)];
        return {p[0], p[1], p[2]};
    }
    void set(int row, int col, Rgb c) {
        std::uint8_t* p = &data_[index(row, col)];
        p[0] = c[0];
        p[1] = c[1];
        p[2] = c[2];
    }

    const std::vector<std::uint8_t>& data() const noexcept { return data_; }
    std::vector<std::uint8_t>& data() noexcept { return data_; }

    /// Copy of the rectangle [x0, x0+w) x [y0, y0+h); must lie inside the image.
    RgbImage crop(int x0, int y0, int w, int h) const;

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t index(int row, int col) const {
        return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// PNG (any bit depth / colour type) or ASCII/binary PBM. Pixels with
// luminance < 128 become 1.
Bitmap read_bitmap(const std::filesystem::path& path);
void write_pbm(const Bitmap& bitmap, const std::filesystem::path& path);

RgbImage read_png(const std::filesystem::path& path);
void write_png(const RgbImage& image, const std::filesystem::path& path);

/// PNG encoding into memory; output bytes depend only on the pixels.
std::vector<std::uint8_t> encode_png(const RgbImage& image);

}  // namespace potsynth

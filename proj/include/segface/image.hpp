#pragma once

#include <cstdint>
#include <vector>

namespace segface {

// 8-bit grayscale frame, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

// Summed-area table with a zero top row and left column, so any rectangle
// sum costs four lookups. Entries are exact integer sums.
class IntegralImage {
public:
    IntegralImage() = default;
    explicit IntegralImage(const GrayImage& img);

    int width() const { return width_; }
    int height() const { return height_; }

    // Sum over the half-open rectangle [x1,x2) x [y1,y2).
    std::uint64_t rect_sum(int x1, int y1, int x2, int y2) const {
        const int stride = width_ + 1;
        return table_[static_cast<std::size_t>(y2) * stride + x2]
             - table_[static_cast<std::size_t>(y1) * stride + x2]
             - table_[static_cast<std::size_t>(y2) * stride + x1]
             + table_[static_cast<std::size_t>(y1) * stride + x1];
    }

    std::uint64_t at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (width_ + 1) + x]; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> table_;
};

IntegralImage integral(const GrayImage& img);

// Block-mean downsampling by an integer factor; trailing partial blocks are
// truncated, so output dims are floor(in/factor). Each output pixel is the
// rounded mean of its factor x factor block.
GrayImage downsample(const GrayImage& img, int factor);

// Rec.601 luma, rounded to nearest.
std::uint8_t luma_from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace segface

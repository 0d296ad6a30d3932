#include "segface/image.hpp"

#include <cmath>
#include <stdexcept>

namespace segface {

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 0 || h < 0) throw std::invalid_argument("GrayImage: negative dimensions");
    data.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

IntegralImage::IntegralImage(const GrayImage& img) : width_(img.width), height_(img.height) {
    const int stride = width_ + 1;
    table_.assign(static_cast<std::size_t>(stride) * (height_ + 1), 0);
    for (int y = 0; y < height_; ++y) {
        std::uint64_t row_sum = 0;
        const std::uint8_t* src = img.data.data() + static_cast<std::size_t>(y) * width_;
        std::uint64_t* above = table_.data() + static_cast<std::size_t>(y) * stride + 1;
        std::uint64_t* dst = table_.data() + static_cast<std::size_t>(y + 1) * stride + 1;
        for (int x = 0; x < width_; ++x) {
            row_sum += src[x];
            dst[x] = above[x] + row_sum;
        }
    }
}

IntegralImage integral(const GrayImage& img) { return IntegralImage(img); }

GrayImage downsample(const GrayImage& img, int factor) {
    if (factor < 1) throw std::invalid_argument("downsample: factor must be >= 1");
    if (factor == 1) return img;
    const int out_w = img.width / factor;
    const int out_h = img.height / factor;
    GrayImage out(out_w, out_h);
    const std::uint32_t area = static_cast<std::uint32_t>(factor) * factor;
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            std::uint32_t sum = 0;
            for (int dy = 0; dy < factor; ++dy) {
                const std::uint8_t* row = img.data.data()
                    + static_cast<std::size_t>(oy * factor + dy) * img.width + ox * factor;
                for (int dx = 0; dx < factor; ++dx) sum += row[dx];
            }
            out.at(ox, oy) = static_cast<std::uint8_t>((sum + area / 2) / area);
        }
    }
    return out;
}

std::uint8_t luma_from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::lround(y));
}

}  // namespace segface

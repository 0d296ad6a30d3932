#include "segface/clahe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace segface {

namespace {

using TileMap = std::array<std::uint8_t, 256>;

TileMap build_tile_map(const GrayImage& img, int x0, int y0, int x1, int y1,
                       double clip_limit, int gmin, int gmax) {
    std::array<std::uint32_t, 256> hist{};
    for (int y = y0; y < y1; ++y) {
        const std::uint8_t* row = img.data.data() + static_cast<std::size_t>(y) * img.width;
        for (int x = x0; x < x1; ++x) ++hist[row[x]];
    }
    const std::uint32_t tile_pixels = static_cast<std::uint32_t>(x1 - x0) * (y1 - y0);

    if (std::isfinite(clip_limit)) {
        const std::uint32_t limit =
            std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::llround(clip_limit * tile_pixels / 256.0)));
        std::uint32_t excess = 0;
        for (auto& h : hist) {
            if (h > limit) {
                excess += h - limit;
                h = limit;
            }
        }
        // Single-pass uniform redistribution; remainder goes to the lowest bins.
        const std::uint32_t share = excess / 256;
        const std::uint32_t residual = excess % 256;
        for (std::uint32_t b = 0; b < 256; ++b) hist[b] += share + (b < residual ? 1 : 0);
    }

    TileMap map{};
    const double range = static_cast<double>(gmax - gmin);
    std::uint64_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        map[v] = static_cast<std::uint8_t>(gmin + std::llround(range * cdf / tile_pixels));
    }
    return map;
}

// For each pixel coordinate, the index of the tile whose center is at or
// left of it, plus the blend weight toward the next tile center.
void axis_weights(int extent, const std::vector<int>& bounds, std::vector<int>& lo, std::vector<double>& w) {
    const int tiles = static_cast<int>(bounds.size()) - 1;
    std::vector<double> center(tiles);
    for (int i = 0; i < tiles; ++i) center[i] = 0.5 * (bounds[i] + bounds[i + 1] - 1);
    lo.resize(extent);
    w.resize(extent);
    int i = 0;
    for (int x = 0; x < extent; ++x) {
        if (x <= center[0]) {
            lo[x] = 0;
            w[x] = 0.0;
        } else if (x >= center[tiles - 1]) {
            lo[x] = tiles - 1;
            w[x] = 0.0;
        } else {
            while (x > center[i + 1]) ++i;
            lo[x] = i;
            w[x] = (x - center[i]) / (center[i + 1] - center[i]);
        }
    }
}

}  // namespace

GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip_limit) {
    if (img.empty()) throw std::invalid_argument("clahe: empty image");
    if (tiles_x < 1 || tiles_y < 1) throw std::invalid_argument("clahe: tile counts must be >= 1");
    if (tiles_x > img.width || tiles_y > img.height)
        throw std::invalid_argument("clahe: tiles smaller than one pixel");
    if (!(clip_limit > 0.0)) throw std::invalid_argument("clahe: clip_limit must be positive");

    int gmin = 255, gmax = 0;
    for (std::uint8_t v : img.data) {
        gmin = std::min<int>(gmin, v);
        gmax = std::max<int>(gmax, v);
    }

    std::vector<int> xb(tiles_x + 1), yb(tiles_y + 1);
    for (int i = 0; i <= tiles_x; ++i) xb[i] = static_cast<int>(static_cast<std::int64_t>(i) * img.width / tiles_x);
    for (int i = 0; i <= tiles_y; ++i) yb[i] = static_cast<int>(static_cast<std::int64_t>(i) * img.height / tiles_y);

    std::vector<TileMap> maps(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty)
        for (int tx = 0; tx < tiles_x; ++tx)
            maps[static_cast<std::size_t>(ty) * tiles_x + tx] =
                build_tile_map(img, xb[tx], yb[ty], xb[tx + 1], yb[ty + 1], clip_limit, gmin, gmax);

    std::vector<int> lx, ly;
    std::vector<double> wx, wy;
    axis_weights(img.width, xb, lx, wx);
    axis_weights(img.height, yb, ly, wy);

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const int t0 = ly[y];
        const int t1 = std::min(t0 + 1, tiles_y - 1);
        const double fy = wy[y];
        const std::uint8_t* src = img.data.data() + static_cast<std::size_t>(y) * img.width;
        std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(y) * img.width;
        for (int x = 0; x < img.width; ++x) {
            const int s0 = lx[x];
            const int s1 = std::min(s0 + 1, tiles_x - 1);
            const double fx = wx[x];
            const std::uint8_t v = src[x];
            const double top = (1.0 - fx) * maps[static_cast<std::size_t>(t0) * tiles_x + s0][v]
                             + fx * maps[static_cast<std::size_t>(t0) * tiles_x + s1][v];
            const double bot = (1.0 - fx) * maps[static_cast<std::size_t>(t1) * tiles_x + s0][v]
                             + fx * maps[static_cast<std::size_t>(t1) * tiles_x + s1][v];
            const double blended = (1.0 - fy) * top + fy * bot;
            dst[x] = static_cast<std::uint8_t>(std::clamp<long>(std::llround(blended), 0, 255));
        }
    }
    return out;
}

}  // namespace segface

#pragma once

#include "segface/image.hpp"

namespace segface {

// Contrast limited adaptive histogram equalization.
//
// The image is divided into tiles_x x tiles_y tiles. Each tile gets a
// 256-bin histogram clipped at clip_limit * tile_pixels / 256; the clipped
// excess is redistributed uniformly in a single pass (integer share to every
// bin, the residual to the lowest bins). Each tile's CDF maps intensities
// into the global [min,max] range of the input, so a constant image is a
// fixed point. Output pixels bilinearly interpolate the four surrounding
// tile mappings; tiles at the border replicate their neighbors.
//
// clip_limit must be positive; +infinity disables clipping (plain AHE).
GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip_limit);

}  // namespace segface

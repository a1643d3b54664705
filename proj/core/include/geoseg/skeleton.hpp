#pragma once

#include "geoseg/tensor.hpp"

namespace geoseg {

/// Zhang-Suen thinning. Pixels outside the frame count as background.
///
/// Plain Zhang-Suen erases some components outright (2x2 blocks, two-pixel
/// thick diagonals). When a sub-iteration would delete every remaining pixel
/// of an 8-connected component, that component's first pixel in row-major
/// order is kept, so the component count never changes.
BinaryMask skeletonize(const BinaryMask& mask);

/// Every set pixel becomes a label-1 scribble point, in row-major order.
/// Throws ErrorCode::kEmptySeeds on an empty skeleton.
ScribbleSet mask_to_scribbles(const BinaryMask& skeleton);

}  // namespace geoseg

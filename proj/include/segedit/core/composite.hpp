#pragma once

#include "segedit/core/image.hpp"
#include "segedit/core/mask.hpp"

namespace segedit {

/// Pastes `generated` over `original` inside `mask`.
///
/// With feather_radius == 0 the switch is hard. Otherwise a mask pixel at
/// Chebyshev distance d from the nearest unmasked pixel gets alpha
/// min(1, d / feather_radius), so the ramp runs inward from the boundary and
/// pixels outside the mask always keep their original value.
ImageBuffer composite(ImageBuffer const& original, ImageBuffer const& generated, Mask const& mask,
                      int feather_radius);

} // namespace segedit

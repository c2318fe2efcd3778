#pragma once

#include "parot/colorxfer.hpp"

#include <cstdint>

namespace fixture {

/// Smooth gradient image with mild noise, deterministic for a given seed.
/// The tint shifts the red and blue channels.
parot::ImageRGB synthetic_image(int width, int height, int red_shift, int blue_shift,
                                std::uint64_t seed);

}  // namespace fixture

#include "fixtures.hpp"

#include <algorithm>
#include <random>

namespace fixture {

parot::ImageRGB synthetic_image(int width, int height, int red_shift, int blue_shift,
                                std::uint64_t seed) {
  parot::ImageRGB img(width, height);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-12, 12);
  auto clip = [](int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t p = 3 * (static_cast<std::size_t>(y) * width + x);
      const int base = 255 * x / std::max(1, width - 1);
      const int shade = 255 * y / std::max(1, height - 1);
      img.pixels[p] = clip((base + shade) / 2 + red_shift + noise(rng));
      img.pixels[p + 1] = clip(shade + noise(rng));
      img.pixels[p + 2] = clip(255 - base + blue_shift + noise(rng));
    }
  return img;
}

}  // namespace fixture

// Writes the synthetic source and palette images used by the CLI test.

#include "fixtures.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_images <dir>\n");
    return 2;
  }
  const std::string dir = argv[1];
  parot::write_png(dir + "/source.png", fixture::synthetic_image(48, 32, 0, 0, 1));
  parot::write_png(dir + "/red.png", fixture::synthetic_image(48, 32, 70, 0, 2));
  parot::write_png(dir + "/blue.png", fixture::synthetic_image(48, 32, 0, 70, 3));
  return 0;
}

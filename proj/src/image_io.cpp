#include "parot/colorxfer.hpp"

#include <png.h>

#include <cstring>

namespace parot {

ImageRGB read_png(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  require(png_image_begin_read_from_file(&img, path.c_str()) != 0, ErrorCode::Io,
          "read_png: cannot open '" + path + "': " + img.message);
  img.format = PNG_FORMAT_RGB;
  ImageRGB out(static_cast<int>(img.width), static_cast<int>(img.height));
  const bool ok = png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr) != 0;
  const std::string msg = img.message;
  png_image_free(&img);
  require(ok, ErrorCode::Io, "read_png: decoding '" + path + "' failed: " + msg);
  return out;
}

void write_png(const std::string& path, const ImageRGB& image) {
  image.check();
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  const bool ok =
      png_image_write_to_file(&img, path.c_str(), 0, image.pixels.data(), 0, nullptr) != 0;
  const std::string msg = img.message;
  png_image_free(&img);
  require(ok, ErrorCode::Io, "write_png: cannot write '" + path + "': " + msg);
}

}  // namespace parot

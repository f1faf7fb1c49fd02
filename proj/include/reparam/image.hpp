#ifndef REPARAM_IMAGE_HPP
#define REPARAM_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reparam/errors.hpp"
#include "reparam/vec.hpp"

namespace reparam {

struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgb;  // row-major, 3 bytes per pixel
};

// Each 3-vector becomes one RGB pixel: floor each coordinate, clamp to
// [0, 255]. Flooring keeps the three pixel cubes visually distinct.
inline ImageBuffer render_pixel_image(const std::vector<Vec>& pixels,
                                      int side) {
  if (side < 1 || static_cast<std::size_t>(side) * side != pixels.size())
    throw DomainError("pixel image needs side*side sampled pixels");
  ImageBuffer img;
  img.width = side;
  img.height = side;
  img.rgb.reserve(pixels.size() * 3);
  for (const Vec& p : pixels) {
    for (int c = 0; c < 3; ++c) {
      double v = std::floor(p[c]);
      v = std::min(255.0, std::max(0.0, v));
      img.rgb.push_back(static_cast<unsigned char>(v));
    }
  }
  return img;
}

// Binary PPM (P6), maxval 255, no comments.
inline void write_ppm(const ImageBuffer& img, std::ostream& os) {
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()),
           static_cast<std::streamsize>(img.rgb.size()));
}

inline std::string ppm_string(const ImageBuffer& img) {
  std::ostringstream os;
  write_ppm(img, os);
  return os.str();
}

}  // namespace reparam

#endif  // REPARAM_IMAGE_HPP

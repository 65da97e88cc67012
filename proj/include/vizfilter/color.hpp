#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizfilter/geometry.hpp"
#include "vizfilter/registry.hpp"

namespace vizfilter {

class ColorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<ReferenceColor>& color_table(const Registry& r) {
  return r.colors().empty() ? Registry::builtin().colors() : r.colors();
}

/// Names the most frequent color: nearest reference color by Euclidean RGB
/// distance, ties to the earlier table entry.
inline std::string name_color(std::span<const Rgb> dominant, const std::vector<ReferenceColor>& table) {
  if (dominant.empty()) throw ColorError("name_color: empty color list");
  if (table.empty()) throw ColorError("name_color: empty reference table");
  const Rgb c = dominant.front();
  long best = std::numeric_limits<long>::max();
  const ReferenceColor* winner = nullptr;
  for (const auto& ref : table) {
    const long dr = long{c.r} - ref.rgb.r, dg = long{c.g} - ref.rgb.g, db = long{c.b} - ref.rgb.b;
    const long d = dr * dr + dg * dg + db * db;
    if (d < best) {
      best = d;
      winner = &ref;
    }
  }
  return winner->name;
}

inline std::string name_color(std::span<const Rgb> dominant, const Registry& r) {
  return name_color(dominant, color_table(r));
}

/// 8-bit RGB image, row-major.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
  }
  static Raster filled(int w, int h, Rgb c) {
    Raster r{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3)};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) r.set(x, y, c);
    return r;
  }
};

namespace detail {

inline void skip_ppm_space(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

}  // namespace detail

/// Reads a binary PPM (P6, maxval 255).
inline Raster read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ColorError("cannot open raster " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6") throw ColorError(path.string() + ": not a binary PPM (P6)");
  int w = 0, h = 0, maxval = 0;
  detail::skip_ppm_space(in);
  in >> w;
  detail::skip_ppm_space(in);
  in >> h;
  detail::skip_ppm_space(in);
  in >> maxval;
  if (!in || w <= 0 || h <= 0 || maxval != 255) throw ColorError(path.string() + ": bad PPM header");
  in.get();
  Raster r{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3)};
  in.read(reinterpret_cast<char*>(r.rgb.data()), static_cast<std::streamsize>(r.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(r.rgb.size())) throw ColorError(path.string() + ": truncated PPM");
  return r;
}

inline void write_ppm(const std::filesystem::path& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ColorError("cannot write raster " + path.string());
  out << "P6\n" << r.width << ' ' << r.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.rgb.data()), static_cast<std::streamsize>(r.rgb.size()));
}

/// Top-3 colors in the box: pixels quantized to 3 bits per channel, bucket
/// centers returned most frequent first (ties by bucket index).
inline std::vector<Rgb> extract_dominant_colors(const Raster& raster, const BBox& box) {
  const int x0 = static_cast<int>(box.x), y0 = static_cast<int>(box.y);
  const int x1 = static_cast<int>(box.x + box.w), y1 = static_cast<int>(box.y + box.h);
  if (!box.valid() || x0 < 0 || y0 < 0 || x1 > raster.width || y1 > raster.height || x1 <= x0 || y1 <= y0)
    throw ColorError("extract_dominant_colors: box outside raster");
  std::array<std::size_t, 512> counts{};
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const Rgb c = raster.at(x, y);
      counts[static_cast<std::size_t>((c.r >> 5) << 6 | (c.g >> 5) << 3 | (c.b >> 5))]++;
    }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  if (order.size() > 3) order.resize(3);
  std::vector<Rgb> out;
  auto center = [](std::size_t q) { return static_cast<std::uint8_t>((q << 5) + 16); };
  for (auto i : order) out.push_back({center(i >> 6), center((i >> 3) & 7), center(i & 7)});
  return out;
}

}  // namespace vizfilter

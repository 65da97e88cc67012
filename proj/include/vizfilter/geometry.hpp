#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vizfilter/program.hpp"

namespace vizfilter {

/// Axis-aligned box in pixels, top-left origin.
struct BBox {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  bool valid() const { return w > 0 && h > 0; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return (iw > 0 && ih > 0) ? iw * ih : 0.0;
}

/// True when strictly more than half of `child` lies inside `parent`.
inline bool majority_contains(const BBox& parent, const BBox& child) {
  return 2.0 * intersection_area(parent, child) > child.area();
}

class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

/// Third (0, 1, 2) of the span [lo, lo + len] holding `twice_center / 2`.
/// Works on doubled coordinates so integer-valued inputs compare exactly; a
/// point on a grid line goes to the lower cell.
inline int third_of(double twice_center, double lo, double len) {
  const double rel3 = 3.0 * (twice_center - 2.0 * lo);  // 6 * (center - lo)
  if (rel3 <= 2.0 * len) return 0;
  if (rel3 <= 4.0 * len) return 1;
  return 2;
}

}  // namespace detail

/// Cell of the parent's 3x3 grid holding the child's center.
inline std::string quadrant_label(const BBox& child, const BBox& parent) {
  const double cx2 = 2.0 * child.x + child.w;
  const double cy2 = 2.0 * child.y + child.h;
  if (cx2 < 2.0 * parent.x || cx2 > 2.0 * parent.right() || cy2 < 2.0 * parent.y ||
      cy2 > 2.0 * parent.bottom())
    throw GeometryError("quadrant_label: child center lies outside the parent box");
  const int col = detail::third_of(cx2, parent.x, parent.w);
  const int row = detail::third_of(cy2, parent.y, parent.h);
  return std::string(kLocationNames[static_cast<std::size_t>(row * 3 + col)]);
}

/// "left of frame" / "center of frame" / "right of frame" by horizontal third.
inline std::string frame_position_phrase(const BBox& box, double frame_width) {
  static constexpr std::array<std::string_view, 3> kPhrases = {"left of frame", "center of frame",
                                                                "right of frame"};
  const int col = detail::third_of(2.0 * box.x + box.w, 0.0, frame_width);
  return std::string(kPhrases[static_cast<std::size_t>(col)]);
}

}  // namespace vizfilter

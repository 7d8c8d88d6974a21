#pragma once

// Exact minimal enclosing circle of a small planar point set by exhaustive
// search: the optimum is determined by two points (diametral circle) or three
// points (circumcircle), so the smallest enclosing candidate is the answer.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Circle {
  long double cx = 0;
  long double cy = 0;
  long double r = std::numeric_limits<long double>::infinity();
};

inline bool encloses(const Circle& c, const std::vector<std::array<double, 2>>& pts) {
  const long double slack = 1e-12L * (1.0L + c.r);
  for (const auto& p : pts) {
    if (std::hypot(p[0] - c.cx, p[1] - c.cy) > c.r + slack) return false;
  }
  return true;
}

inline Circle minimal_enclosing_circle(const std::vector<std::array<double, 2>>& pts) {
  Circle best;
  if (pts.size() == 1) return {pts[0][0], pts[0][1], 0.0L};
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Circle c{(pts[i][0] + pts[j][0]) / 2.0L, (pts[i][1] + pts[j][1]) / 2.0L, 0};
      c.r = std::hypot(pts[i][0] - c.cx, pts[i][1] - c.cy);
      if (c.r < best.r && encloses(c, pts)) best = c;
      for (std::size_t k = j + 1; k < n; ++k) {
        const long double ax = pts[i][0], ay = pts[i][1];
        const long double bx = pts[j][0] - ax, by = pts[j][1] - ay;
        const long double qx = pts[k][0] - ax, qy = pts[k][1] - ay;
        const long double det = 2.0L * (bx * qy - by * qx);
        if (std::fabs(det) < 1e-18L) continue;
        const long double b2 = bx * bx + by * by;
        const long double q2 = qx * qx + qy * qy;
        Circle t;
        t.cx = ax + (qy * b2 - by * q2) / det;
        t.cy = ay + (bx * q2 - qx * b2) / det;
        t.r = std::hypot(ax - t.cx, ay - t.cy);
        if (t.r < best.r && encloses(t, pts)) best = t;
      }
    }
  }
  return best;
}

}  // namespace oracle

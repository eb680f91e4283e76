#include "saef/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "saef/csv.hpp"

namespace saef {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0) - (v < 0); }

// Ring without a repeated closing vertex.
std::span<const Point> open_ring(std::span<const Point> ring) {
  if (ring.size() > 1 && ring.front() == ring.back()) return ring.first(ring.size() - 1);
  return ring;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, Point{a.x + t * dx, a.y + t * dy});
}

double point_polyline_distance(Point p, std::span<const Point> polyline) {
  if (polyline.size() == 1) return distance(p, polyline[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, point_segment_distance(p, polyline[i], polyline[i + 1]));
  }
  return best;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

double polyline_length(std::span<const Point> polyline) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) total += distance(polyline[i], polyline[i + 1]);
  return total;
}

Point point_along(std::span<const Point> polyline, double fraction) {
  if (polyline.empty()) throw std::invalid_argument("point_along: empty polyline");
  const double total = polyline_length(polyline);
  double target = std::clamp(fraction, 0.0, 1.0) * total;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const double seg = distance(polyline[i], polyline[i + 1]);
    if (target <= seg && seg > 0.0) {
      const double t = target / seg;
      return {polyline[i].x + t * (polyline[i + 1].x - polyline[i].x),
              polyline[i].y + t * (polyline[i + 1].y - polyline[i].y)};
    }
    target -= seg;
  }
  return polyline.back();
}

bool point_in_polygon(Point p, std::span<const Point> ring) {
  auto r = open_ring(ring);
  const std::size_t n = r.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = r[i], b = r[j];
    if (cross(a, b, p) == 0.0 && on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool point_strictly_in_polygon(Point p, std::span<const Point> ring) {
  auto r = open_ring(ring);
  const std::size_t n = r.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (cross(r[i], r[j], p) == 0.0 && on_segment(p, r[i], r[j])) return false;
  }
  return point_in_polygon(p, ring);
}

double ring_area(std::span<const Point> ring) {
  auto r = open_ring(ring);
  double twice = 0.0;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    twice += (r[j].x * r[i].y) - (r[i].x * r[j].y);
  }
  return std::abs(twice) * 0.5;
}

double polygon_polyline_distance(std::span<const Point> ring, std::span<const Point> polyline) {
  auto r = open_ring(ring);
  for (const Point& p : polyline) {
    if (point_in_polygon(p, r)) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = r.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (polyline.size() == 1) {
      best = std::min(best, point_segment_distance(polyline[0], r[j], r[i]));
      continue;
    }
    for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
      best = std::min(best, segment_segment_distance(r[j], r[i], polyline[k], polyline[k + 1]));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

Box bounding_box(std::span<const Point> pts) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

bool rings_overlap(std::span<const Point> a, std::span<const Point> b) {
  auto ra = open_ring(a);
  auto rb = open_ring(b);
  for (const Point& p : ra) {
    if (point_strictly_in_polygon(p, rb)) return true;
  }
  for (const Point& p : rb) {
    if (point_strictly_in_polygon(p, ra)) return true;
  }
  // Proper crossings of edges.
  for (std::size_t i = 0, j = ra.size() - 1; i < ra.size(); j = i++) {
    for (std::size_t k = 0, l = rb.size() - 1; k < rb.size(); l = k++) {
      const int d1 = sign(cross(rb[l], rb[k], ra[j]));
      const int d2 = sign(cross(rb[l], rb[k], ra[i]));
      const int d3 = sign(cross(ra[j], ra[i], rb[l]));
      const int d4 = sign(cross(ra[j], ra[i], rb[k]));
      if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    }
  }
  // Identical rings share every edge but still overlap.
  if (ra.size() >= 3 && rb.size() >= 3) {
    double cx = 0, cy = 0;
    for (const Point& p : ra) cx += p.x, cy += p.y;
    Point c{cx / ra.size(), cy / ra.size()};
    if (point_strictly_in_polygon(c, ra) && point_strictly_in_polygon(c, rb)) return true;
  }
  return false;
}

Polyline parse_wkt_linestring(std::string_view wkt) {
  auto fail = [&] { throw std::invalid_argument("malformed WKT LINESTRING: " + std::string(wkt)); };
  std::size_t i = 0;
  while (i < wkt.size() && std::isspace(static_cast<unsigned char>(wkt[i]))) ++i;
  constexpr std::string_view kTag = "LINESTRING";
  if (wkt.size() - i < kTag.size()) fail();
  for (std::size_t k = 0; k < kTag.size(); ++k) {
    if (std::toupper(static_cast<unsigned char>(wkt[i + k])) != kTag[k]) fail();
  }
  i += kTag.size();
  const std::size_t open = wkt.find('(', i);
  const std::size_t close = wkt.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) fail();
  std::string_view body = wkt.substr(open + 1, close - open - 1);

  Polyline out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view pair = body.substr(pos, comma - pos);
    double xy[2];
    std::size_t p = 0;
    for (double& v : xy) {
      while (p < pair.size() && std::isspace(static_cast<unsigned char>(pair[p]))) ++p;
      auto [ptr, ec] = std::from_chars(pair.data() + p, pair.data() + pair.size(), v);
      if (ec != std::errc() || !std::isfinite(v)) fail();
      p = static_cast<std::size_t>(ptr - pair.data());
    }
    while (p < pair.size() && std::isspace(static_cast<unsigned char>(pair[p]))) ++p;
    if (p != pair.size()) fail();
    out.push_back({xy[0], xy[1]});
    pos = comma + 1;
  }
  if (out.size() < 2) fail();
  return out;
}

std::string format_wkt_linestring(std::span<const Point> polyline) {
  std::string s = "LINESTRING (";
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    if (i) s += ", ";
    s += format_double(polyline[i].x);
    s += ' ';
    s += format_double(polyline[i].y);
  }
  s += ')';
  return s;
}

}  // namespace saef

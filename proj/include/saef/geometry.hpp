#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace saef {

/// Planar point in projected meters.
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Polyline = std::vector<Point>;

/// A polygon ring. The closing vertex may or may not repeat the first one;
/// all routines treat the ring as implicitly closed.
using Ring = std::vector<Point>;

struct Box {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

inline constexpr double kMetersPerMile = 1609.344;

double distance(Point a, Point b);
double point_segment_distance(Point p, Point a, Point b);

/// Minimum Euclidean distance from a point to any segment of the polyline.
double point_polyline_distance(Point p, std::span<const Point> polyline);

double segment_segment_distance(Point a, Point b, Point c, Point d);
bool segments_intersect(Point a, Point b, Point c, Point d);

double polyline_length(std::span<const Point> polyline);

/// Point at the given arc-length fraction (0..1) along the polyline.
Point point_along(std::span<const Point> polyline, double fraction);

/// Even-odd rule; points on an edge or vertex count as inside.
bool point_in_polygon(Point p, std::span<const Point> ring);

/// Strict interior test: boundary points are outside.
bool point_strictly_in_polygon(Point p, std::span<const Point> ring);

/// Absolute shoelace area.
double ring_area(std::span<const Point> ring);

/// Zero when the polyline touches or enters the polygon, else the minimum
/// distance between the polyline and the polygon boundary.
double polygon_polyline_distance(std::span<const Point> ring, std::span<const Point> polyline);

Box bounding_box(std::span<const Point> pts);

/// True when the interiors of two rings overlap (shared edges do not count).
bool rings_overlap(std::span<const Point> a, std::span<const Point> b);

/// Parses `LINESTRING (x y, x y, ...)`. Throws std::invalid_argument.
Polyline parse_wkt_linestring(std::string_view wkt);
std::string format_wkt_linestring(std::span<const Point> polyline);

}  // namespace saef

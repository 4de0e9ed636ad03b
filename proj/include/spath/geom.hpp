#pragma once
// 2D computational geometry: wall-plane projection, convex polygons from
// half-plane intersections, doorway quadrilateral fitting, containment and
// area primitives. Everything here is an immutable value; operations are pure.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spath {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Vec3&) const = default;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

inline double distance(const Vec3& a, const Vec3& b) {
    return Vec3{a.x - b.x, a.y - b.y, a.z - b.z}.norm();
}

// Vertical wall plane n.p + d = 0 with the unit normal pointing into the room.
struct WallPlane {
    Vec3 normal;
    double offset = 0.0;

    bool operator==(const WallPlane&) const = default;
};

// Oriented 2D line n.p + d = 0; the interior side satisfies n.p + d > 0.
struct Line2D {
    Vec2 normal;
    double offset = 0.0;

    double signed_dist(Vec2 p) const { return normal.dot(p) + offset; }
};

Line2D project_wall(const WallPlane& wall);

// Convex polygon with CCW vertices; extruded to `height` in 3D but planar here.
class ConvexPolygon {
  public:
    // Canonicalizes the input: enforces CCW order, drops duplicate and
    // collinear vertices, and rejects non-convex rings.
    static ConvexPolygon from_vertices(std::vector<Vec2> verts, double height = 0.0);

    const std::vector<Vec2>& vertices() const { return verts_; }
    double height() const { return height_; }

    double area() const;
    double perimeter() const;
    Vec2 centroid() const;
    void bounds(Vec2& lo, Vec2& hi) const;

    // Boundary points count as inside (tolerance 1e-9).
    bool contains(Vec2 p, double tol = 1e-9) const;

    // Distance from p to the polygon boundary (0 only for boundary points).
    double boundary_distance(Vec2 p) const;

    bool operator==(const ConvexPolygon&) const = default;

  private:
    std::vector<Vec2> verts_;
    double height_ = 0.0;
};

inline bool contains(const ConvexPolygon& poly, Vec2 p) { return poly.contains(p); }
double polygon_area(const ConvexPolygon& poly);

// Intersection of half-planes {p : n.p + d >= 0}. Throws if the region is
// empty or unbounded; `who` names the offending entity in error messages.
ConvexPolygon half_plane_intersection(const std::vector<Line2D>& halves, double height,
                                      const std::string& who);

// Doorway quadrilateral between two room polygons. The center ray runs along
// the outward normal of the boundary segment (over both rooms) closest to the
// doorway centroid; two rays offset +-width/2 laterally are intersected with
// each room's boundary, and the four hits form the quad. Degenerate quads
// (rooms sharing an edge) are replaced by a box of depth `min_depth`.
// Rays longer than 10x the doorway width are treated as misses.
ConvexPolygon doorway_contour(Vec2 centroid, double width, const ConvexPolygon& room_a,
                              const ConvexPolygon& room_b, double min_depth,
                              const std::string& who);

}  // namespace spath

#include "spath/geom.hpp"

#include <algorithm>
#include <limits>

namespace spath {

namespace {

constexpr double kConvexTol = 1e-7;
// Clip box half-extent for half-plane intersections; vertices this far out
// mean the intersection is unbounded.
constexpr double kClipExtent = 1e6;

// Sutherland-Hodgman clip of a CCW polygon against one half-plane.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Line2D& h) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double da = h.signed_dist(a);
        const double db = h.signed_dist(b);
        if (da >= 0.0) {
            out.push_back(a);
            if (db < 0.0) {
                const double t = da / (da - db);
                out.push_back(a + (b - a) * t);
            }
        } else if (db >= 0.0) {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= 0.0) return distance(a, p);
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return distance(a + ab * t, p);
}

}  // namespace

Line2D project_wall(const WallPlane& wall) {
    if (std::abs(wall.normal.z) > 1e-9)
        throw Error("project_wall: wall normal is not vertical (z component " +
                    std::to_string(wall.normal.z) + ")");
    return Line2D{{wall.normal.x, wall.normal.y}, wall.offset};
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Vec2> verts, double height) {
    if (verts.size() < 3) throw Error("polygon needs at least 3 vertices");

    // Enforce CCW via the shoelace sign.
    double twice_area = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % verts.size()];
        twice_area += a.cross(b);
    }
    if (twice_area < 0.0) std::reverse(verts.begin(), verts.end());

    // Drop duplicates and collinear middles.
    std::vector<Vec2> clean;
    for (const Vec2& v : verts) {
        if (!clean.empty() && distance(clean.back(), v) < 1e-9) continue;
        clean.push_back(v);
    }
    while (clean.size() > 1 && distance(clean.front(), clean.back()) < 1e-9) clean.pop_back();
    std::vector<Vec2> final;
    const std::size_t n = clean.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 prev = clean[(i + n - 1) % n];
        const Vec2 cur = clean[i];
        const Vec2 next = clean[(i + 1) % n];
        if (std::abs((cur - prev).cross(next - cur)) < kConvexTol &&
            (cur - prev).dot(next - cur) > 0.0)
            continue;  // collinear middle vertex
        final.push_back(cur);
    }
    if (final.size() < 3) throw Error("polygon degenerate after cleanup");

    for (std::size_t i = 0; i < final.size(); ++i) {
        const Vec2 a = final[i];
        const Vec2 b = final[(i + 1) % final.size()];
        const Vec2 c = final[(i + 2) % final.size()];
        if ((b - a).cross(c - b) < -kConvexTol) throw Error("polygon is not convex");
    }

    ConvexPolygon poly;
    poly.verts_ = std::move(final);
    poly.height_ = height;
    return poly;
}

double ConvexPolygon::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        twice += verts_[i].cross(verts_[(i + 1) % verts_.size()]);
    return 0.5 * twice;
}

double ConvexPolygon::perimeter() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        sum += distance(verts_[i], verts_[(i + 1) % verts_.size()]);
    return sum;
}

Vec2 ConvexPolygon::centroid() const {
    double twice = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2 a = verts_[i];
        const Vec2 b = verts_[(i + 1) % verts_.size()];
        const double w = a.cross(b);
        twice += w;
        c = c + (a + b) * w;
    }
    return c * (1.0 / (3.0 * twice));
}

void ConvexPolygon::bounds(Vec2& lo, Vec2& hi) const {
    lo = hi = verts_.front();
    for (const Vec2& v : verts_) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2 a = verts_[i];
        const Vec2 b = verts_[(i + 1) % verts_.size()];
        if ((b - a).cross(p - a) < -tol) return false;
    }
    return true;
}

double ConvexPolygon::boundary_distance(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < verts_.size(); ++i)
        best = std::min(best, segment_point_distance(verts_[i], verts_[(i + 1) % verts_.size()], p));
    return best;
}

double polygon_area(const ConvexPolygon& poly) { return poly.area(); }

ConvexPolygon half_plane_intersection(const std::vector<Line2D>& halves, double height,
                                      const std::string& who) {
    std::vector<Vec2> poly = {{-kClipExtent, -kClipExtent},
                              {kClipExtent, -kClipExtent},
                              {kClipExtent, kClipExtent},
                              {-kClipExtent, kClipExtent}};
    for (const Line2D& h : halves) {
        poly = clip(poly, h);
        if (poly.size() < 3) throw Error("half-plane intersection empty for " + who);
    }
    for (const Vec2& v : poly)
        if (std::abs(v.x) > 0.5 * kClipExtent || std::abs(v.y) > 0.5 * kClipExtent)
            throw Error("half-plane intersection unbounded for " + who);
    return ConvexPolygon::from_vertices(std::move(poly), height);
}

namespace {

// Closest boundary segment (by distance to p) over a polygon; returns the
// outward unit normal of that segment and the distance.
void closest_segment(const ConvexPolygon& poly, Vec2 p, double& best_dist, Vec2& out_normal) {
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % v.size()];
        const double d = segment_point_distance(a, b, p);
        if (d < best_dist) {
            best_dist = d;
            const Vec2 edge = b - a;
            // CCW polygon: outward normal is the right-hand perpendicular.
            Vec2 n{edge.y, -edge.x};
            const double len = n.norm();
            out_normal = n * (1.0 / len);
        }
    }
}

// Nearest crossing of the line o + t*dir with the polygon boundary, smallest
// |t| wins; returns false when no crossing lies within max_t.
bool nearest_boundary_hit(const ConvexPolygon& poly, Vec2 o, Vec2 dir, double max_t, Vec2& hit) {
    const auto& v = poly.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % v.size()];
        const Vec2 e = b - a;
        const double denom = dir.cross(e);
        if (std::abs(denom) < 1e-12) continue;
        const Vec2 ao = a - o;
        const double t = ao.cross(e) / denom;
        const double u = ao.cross(dir) / denom;
        if (u < -1e-9 || u > 1.0 + 1e-9) continue;
        if (std::abs(t) < std::abs(best)) best = t;
    }
    if (!std::isfinite(best) || std::abs(best) > max_t) return false;
    hit = o + dir * best;
    return true;
}

}  // namespace

ConvexPolygon doorway_contour(Vec2 centroid, double width, const ConvexPolygon& room_a,
                              const ConvexPolygon& room_b, double min_depth,
                              const std::string& who) {
    double best = std::numeric_limits<double>::infinity();
    Vec2 ray{1.0, 0.0};
    closest_segment(room_a, centroid, best, ray);
    closest_segment(room_b, centroid, best, ray);

    const Vec2 lateral = ray.perp();
    const double max_t = 10.0 * width;
    const double height = std::max(room_a.height(), room_b.height());

    Vec2 a_hits[2], b_hits[2];
    const double offs[2] = {-0.5 * width, 0.5 * width};
    for (int k = 0; k < 2; ++k) {
        const Vec2 o = centroid + lateral * offs[k];
        if (!nearest_boundary_hit(room_a, o, ray, max_t, a_hits[k]) ||
            !nearest_boundary_hit(room_b, o, ray, max_t, b_hits[k]))
            throw Error("doorway ray missed a room boundary for " + who);
    }

    // Depth along the center ray; near-zero means the rooms share the edge.
    const double depth = std::abs(ray.dot(a_hits[0] - b_hits[0]));
    if (depth < min_depth) {
        std::vector<Vec2> box;
        for (int sr : {-1, 1})
            for (int sl : {-1, 1})
                box.push_back(centroid + ray * (0.5 * min_depth * sr) + lateral * (0.5 * width * sl * sr));
        return ConvexPolygon::from_vertices(std::move(box), height);
    }

    return ConvexPolygon::from_vertices({a_hits[0], a_hits[1], b_hits[1], b_hits[0]}, height);
}

}  // namespace spath

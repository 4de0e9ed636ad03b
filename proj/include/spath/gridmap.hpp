#pragma once
// Planar occupancy grid, exact Euclidean distance field, cell masks realizing
// restricted sample spaces, validity checks and uniform region sampling.
// Grids, fields and masks are immutable once built and safe to share across
// planner workers.

#include <cstdint>
#include <string>
#include <vector>

#include "spath/geom.hpp"
#include "spath/rng.hpp"

namespace spath {

struct OccupancyGrid {
    Vec2 origin;             // world position of the (0,0) cell's min corner
    double resolution = 0.05;  // meters per cell
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> occupied;

    bool operator==(const OccupancyGrid&) const = default;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
    bool occ(int i, int j) const { return occupied[index(i, j)] != 0; }
    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * resolution, origin.y + (j + 0.5) * resolution};
    }
    bool cell_of(Vec2 p, int& i, int& j) const {
        i = static_cast<int>(std::floor((p.x - origin.x) / resolution));
        j = static_cast<int>(std::floor((p.y - origin.y) / resolution));
        return i >= 0 && j >= 0 && i < width && j < height;
    }
    bool in_bounds(Vec2 p) const {
        int i, j;
        return cell_of(p, i, j);
    }
    double cell_area() const { return resolution * resolution; }
    std::size_t occupied_count() const;
    double free_area() const;
};

// Axis-aligned obstacle rectangle for the declarative grid format.
struct Rect {
    Vec2 lo;
    Vec2 hi;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

// Grid whose cells are occupied iff their center lies in some rectangle.
OccupancyGrid grid_from_rects(Vec2 lo, Vec2 hi, double resolution, const std::vector<Rect>& rects);

// 8-bit PGM (0 = occupied, 255 = free, threshold 128) with a JSON sidecar
// holding {origin, resolution}. Pixel row 0 is the top of the map (max y).
void save_grid(const OccupancyGrid& grid, const std::string& pgm_path,
               const std::string& meta_path);
OccupancyGrid load_grid(const std::string& pgm_path, const std::string& meta_path);

// Rectangle-list JSON format (schema "spath-grid-rects/1").
OccupancyGrid grid_from_rect_json(const std::string& text);
std::string grid_rects_to_json(Vec2 lo, Vec2 hi, double resolution, const std::vector<Rect>& rects);

struct DistanceField {
    Vec2 origin;
    double resolution = 0.05;
    int width = 0;
    int height = 0;
    std::vector<double> dist;  // meters to the nearest occupied cell center

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
    double at(int i, int j) const { return dist[index(i, j)]; }

    // Bilinear interpolation over cell-center samples, clamped at the border.
    double interp(Vec2 p) const;

    bool in_bounds(Vec2 p) const {
        return p.x >= origin.x && p.y >= origin.y && p.x < origin.x + width * resolution &&
               p.y < origin.y + height * resolution;
    }
};

// Exact Euclidean distance transform (cell-center metric). Grids with no
// occupied cell get +inf everywhere.
DistanceField distance_field(const OccupancyGrid& grid);

struct CellMask {
    Vec2 origin;
    double resolution = 0.05;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> member;
    std::vector<std::uint32_t> cells;  // indices of member cells, for sampling

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
    bool contains_cell(int i, int j) const { return member[index(i, j)] != 0; }
    bool contains_point(Vec2 p) const {
        const int i = static_cast<int>(std::floor((p.x - origin.x) / resolution));
        const int j = static_cast<int>(std::floor((p.y - origin.y) / resolution));
        if (i < 0 || j < 0 || i >= width || j >= height) return false;
        return contains_cell(i, j);
    }
    std::size_t count() const { return cells.size(); }
    double area() const { return static_cast<double>(cells.size()) * resolution * resolution; }
    Vec2 cell_center(std::uint32_t idx) const {
        const int i = static_cast<int>(idx) % width;
        const int j = static_cast<int>(idx) / width;
        return {origin.x + (i + 0.5) * resolution, origin.y + (j + 0.5) * resolution};
    }
};

// Mask of cells whose center is contained in any polygon. Throws if empty.
CellMask rasterize(const std::vector<ConvexPolygon>& polys, const OccupancyGrid& grid);

// True iff p is in bounds, the interpolated clearance is >= radius, and p's
// cell is in the mask (when one is given).
bool is_valid(Vec2 p, double radius, const DistanceField& df, const CellMask* mask);

// Point checks spaced at most resolution/2 along [a, b], endpoints included.
bool segment_valid(Vec2 a, Vec2 b, double radius, const DistanceField& df, const CellMask* mask);

// Number of point checks segment_valid performs for a segment of this length.
std::size_t segment_check_points(double length, double resolution);

// Uniform sample over the mask: uniform member cell, uniform jitter within it.
Vec2 sample(const CellMask& mask, Rng& rng);

}  // namespace spath

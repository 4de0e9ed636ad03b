#pragma once
// Composed contours: boolean unions of convex room/doorway polygons realized
// as rasterized cell masks. These are the reduced sample spaces handed to the
// geometric planners and the area source for the effort heuristic.

#include <string>
#include <vector>

#include "spath/geom.hpp"
#include "spath/gridmap.hpp"

namespace spath {

struct ComposedContour {
    std::vector<ConvexPolygon> members;
    std::vector<std::string> member_ids;  // semantic ids, parallel to members
    double area = 0.0;                    // rasterized union area, m^2
    CellMask cells;

    bool contains(Vec2 p) const {
        for (const auto& poly : members)
            if (poly.contains(p)) return true;
        return false;
    }
};

ComposedContour compose(std::vector<ConvexPolygon> polys, std::vector<std::string> ids,
                        const OccupancyGrid& grid);

// Union of several contours (deduplicates members by id).
ComposedContour merge_contours(const ComposedContour& a, const ComposedContour& b,
                               const OccupancyGrid& grid);

}  // namespace spath

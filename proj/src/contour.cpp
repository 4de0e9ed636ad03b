#include "spath/contour.hpp"

#include <algorithm>

namespace spath {

ComposedContour compose(std::vector<ConvexPolygon> polys, std::vector<std::string> ids,
                        const OccupancyGrid& grid) {
    if (polys.empty()) throw Error("compose: no polygons");
    ComposedContour cc;
    cc.cells = rasterize(polys, grid);
    cc.area = cc.cells.area();
    cc.members = std::move(polys);
    cc.member_ids = std::move(ids);
    return cc;
}

ComposedContour merge_contours(const ComposedContour& a, const ComposedContour& b,
                               const OccupancyGrid& grid) {
    std::vector<ConvexPolygon> polys = a.members;
    std::vector<std::string> ids = a.member_ids;
    for (std::size_t k = 0; k < b.members.size(); ++k) {
        if (std::find(ids.begin(), ids.end(), b.member_ids[k]) != ids.end()) continue;
        polys.push_back(b.members[k]);
        ids.push_back(b.member_ids[k]);
    }
    return compose(std::move(polys), std::move(ids), grid);
}

}  // namespace spath

#include "spath/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace spath {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::size_t OccupancyGrid::occupied_count() const {
    std::size_t n = 0;
    for (auto v : occupied) n += v != 0;
    return n;
}

double OccupancyGrid::free_area() const {
    return static_cast<double>(static_cast<std::size_t>(width) * height - occupied_count()) *
           cell_area();
}

OccupancyGrid grid_from_rects(Vec2 lo, Vec2 hi, double resolution, const std::vector<Rect>& rects) {
    if (resolution <= 0.0 || hi.x <= lo.x || hi.y <= lo.y)
        throw Error("grid_from_rects: bad bounds or resolution");
    OccupancyGrid g;
    g.origin = lo;
    g.resolution = resolution;
    g.width = static_cast<int>(std::ceil((hi.x - lo.x) / resolution - 1e-9));
    g.height = static_cast<int>(std::ceil((hi.y - lo.y) / resolution - 1e-9));
    g.occupied.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    for (int j = 0; j < g.height; ++j)
        for (int i = 0; i < g.width; ++i) {
            const Vec2 c = g.cell_center(i, j);
            for (const Rect& r : rects)
                if (r.contains(c)) {
                    g.occupied[g.index(i, j)] = 1;
                    break;
                }
        }
    return g;
}

void save_grid(const OccupancyGrid& grid, const std::string& pgm_path,
               const std::string& meta_path) {
    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw Error("cannot write " + pgm_path);
    pgm << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    for (int j = grid.height - 1; j >= 0; --j)
        for (int i = 0; i < grid.width; ++i)
            pgm.put(grid.occ(i, j) ? '\0' : static_cast<char>(255));

    nlohmann::json meta;
    meta["origin"] = {grid.origin.x, grid.origin.y};
    meta["resolution"] = grid.resolution;
    std::ofstream out(meta_path);
    if (!out) throw Error("cannot write " + meta_path);
    out << meta.dump(2) << "\n";
}

OccupancyGrid load_grid(const std::string& pgm_path, const std::string& meta_path) {
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw Error("cannot read " + meta_path);
    nlohmann::json meta = nlohmann::json::parse(meta_in);

    std::ifstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw Error("cannot read " + pgm_path);
    std::string magic;
    pgm >> magic;
    if (magic != "P5") throw Error(pgm_path + ": expected binary PGM (P5)");
    int w, h, maxval;
    pgm >> w >> h >> maxval;
    pgm.get();  // single whitespace after the header
    if (w <= 0 || h <= 0 || maxval != 255) throw Error(pgm_path + ": bad PGM header");

    OccupancyGrid g;
    g.origin = {meta.at("origin")[0].get<double>(), meta.at("origin")[1].get<double>()};
    g.resolution = meta.at("resolution").get<double>();
    g.width = w;
    g.height = h;
    g.occupied.assign(static_cast<std::size_t>(w) * h, 0);
    std::vector<char> row(w);
    for (int j = h - 1; j >= 0; --j) {
        pgm.read(row.data(), w);
        if (!pgm) throw Error(pgm_path + ": truncated pixel data");
        for (int i = 0; i < w; ++i)
            g.occupied[g.index(i, j)] = static_cast<unsigned char>(row[i]) < 128 ? 1 : 0;
    }
    return g;
}

OccupancyGrid grid_from_rect_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.value("schema", "") != "spath-grid-rects/1")
        throw Error("rect grid: unknown schema " + doc.value("schema", "(none)"));
    const Vec2 lo{doc.at("bounds").at("min")[0].get<double>(),
                  doc.at("bounds").at("min")[1].get<double>()};
    const Vec2 hi{doc.at("bounds").at("max")[0].get<double>(),
                  doc.at("bounds").at("max")[1].get<double>()};
    std::vector<Rect> rects;
    for (const auto& r : doc.at("obstacles"))
        rects.push_back(Rect{{r.at("min")[0].get<double>(), r.at("min")[1].get<double>()},
                             {r.at("max")[0].get<double>(), r.at("max")[1].get<double>()}});
    return grid_from_rects(lo, hi, doc.at("resolution").get<double>(), rects);
}

std::string grid_rects_to_json(Vec2 lo, Vec2 hi, double resolution, const std::vector<Rect>& rects) {
    nlohmann::json doc;
    doc["schema"] = "spath-grid-rects/1";
    doc["bounds"]["min"] = {lo.x, lo.y};
    doc["bounds"]["max"] = {hi.x, hi.y};
    doc["resolution"] = resolution;
    doc["obstacles"] = nlohmann::json::array();
    for (const Rect& r : rects)
        doc["obstacles"].push_back({{"min", {r.lo.x, r.lo.y}}, {"max", {r.hi.x, r.hi.y}}});
    return doc.dump(2);
}

double DistanceField::interp(Vec2 p) const {
    // Sample the cell-center lattice; clamp to the border cells.
    const double u = (p.x - origin.x) / resolution - 0.5;
    const double v = (p.y - origin.y) / resolution - 0.5;
    int i0 = static_cast<int>(std::floor(u));
    int j0 = static_cast<int>(std::floor(v));
    const double fu = u - i0;
    const double fv = v - j0;
    const auto clamped = [&](int i, int j) {
        i = std::clamp(i, 0, width - 1);
        j = std::clamp(j, 0, height - 1);
        return at(i, j);
    };
    const double d00 = clamped(i0, j0);
    const double d10 = clamped(i0 + 1, j0);
    const double d01 = clamped(i0, j0 + 1);
    const double d11 = clamped(i0 + 1, j0 + 1);
    return (d00 * (1 - fu) + d10 * fu) * (1 - fv) + (d01 * (1 - fu) + d11 * fu) * fv;
}

namespace {

// Felzenszwalb-Huttenlocher 1D squared distance transform. Positions with
// f = +inf contribute no parabola; an all-inf scanline stays +inf.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z, int n) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s = 0.0;
        while (k >= 0) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k])
                --k;
            else
                break;
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -kInf : s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.begin() + n, kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        d[q] = (q - v[k]) * static_cast<double>(q - v[k]) + f[v[k]];
    }
}

}  // namespace

DistanceField distance_field(const OccupancyGrid& grid) {
    DistanceField df;
    df.origin = grid.origin;
    df.resolution = grid.resolution;
    df.width = grid.width;
    df.height = grid.height;
    const std::size_t n = static_cast<std::size_t>(grid.width) * grid.height;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = grid.occupied[i] ? 0.0 : kInf;

    const int dim = std::max(grid.width, grid.height);
    std::vector<double> f(dim), d(dim), z(dim + 1);
    std::vector<int> v(dim);

    // Columns first, then rows.
    for (int i = 0; i < grid.width; ++i) {
        for (int j = 0; j < grid.height; ++j) f[j] = sq[grid.index(i, j)];
        edt_1d(f, d, v, z, grid.height);
        for (int j = 0; j < grid.height; ++j) sq[grid.index(i, j)] = d[j];
    }
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) f[i] = sq[grid.index(i, j)];
        edt_1d(f, d, v, z, grid.width);
        for (int i = 0; i < grid.width; ++i) sq[grid.index(i, j)] = d[i];
    }

    df.dist.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        df.dist[i] = sq[i] == kInf ? kInf : std::sqrt(sq[i]) * grid.resolution;
    return df;
}

CellMask rasterize(const std::vector<ConvexPolygon>& polys, const OccupancyGrid& grid) {
    CellMask m;
    m.origin = grid.origin;
    m.resolution = grid.resolution;
    m.width = grid.width;
    m.height = grid.height;
    m.member.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);
    for (const ConvexPolygon& poly : polys) {
        Vec2 lo, hi;
        poly.bounds(lo, hi);
        int i0, j0, i1, j1;
        grid.cell_of(lo, i0, j0);
        grid.cell_of(hi, i1, j1);
        i0 = std::clamp(i0, 0, grid.width - 1);
        j0 = std::clamp(j0, 0, grid.height - 1);
        i1 = std::clamp(i1, 0, grid.width - 1);
        j1 = std::clamp(j1, 0, grid.height - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const std::size_t idx = m.index(i, j);
                if (!m.member[idx] && poly.contains(grid.cell_center(i, j))) m.member[idx] = 1;
            }
    }
    for (std::uint32_t idx = 0; idx < m.member.size(); ++idx)
        if (m.member[idx]) m.cells.push_back(idx);
    if (m.cells.empty()) throw Error("rasterize: empty mask");
    return m;
}

bool is_valid(Vec2 p, double radius, const DistanceField& df, const CellMask* mask) {
    if (!df.in_bounds(p)) return false;
    if (df.interp(p) < radius) return false;
    if (mask && !mask->contains_point(p)) return false;
    return true;
}

std::size_t segment_check_points(double length, double resolution) {
    const double step = 0.5 * resolution;
    return static_cast<std::size_t>(std::ceil(length / step)) + 1;
}

bool segment_valid(Vec2 a, Vec2 b, double radius, const DistanceField& df, const CellMask* mask) {
    const double len = distance(a, b);
    const std::size_t n = segment_check_points(len, df.resolution);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        if (!is_valid(a + (b - a) * t, radius, df, mask)) return false;
    }
    return true;
}

Vec2 sample(const CellMask& mask, Rng& rng) {
    if (mask.cells.empty()) throw Error("sample: empty mask");
    const std::uint32_t idx = mask.cells[rng.below(mask.cells.size())];
    const Vec2 c = mask.cell_center(idx);
    const double half = 0.5 * mask.resolution;
    return {c.x + rng.uniform(-half, half), c.y + rng.uniform(-half, half)};
}

}  // namespace spath

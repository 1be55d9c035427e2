#include "lerw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace lerw {

std::vector<LatticePoint> ball(int32_t n) {
    if (n < 0) throw PreconditionError("ball: radius must be >= 0");
    std::vector<LatticePoint> out;
    int64_t n2 = int64_t(n) * n;
    for (int32_t x = -n; x <= n; ++x) {
        for (int32_t y = -n; y <= n; ++y) {
            if (int64_t(x) * x + int64_t(y) * y <= n2) out.push_back({x, y});
        }
    }
    return out;
}

std::vector<LatticePoint> boundary(const std::vector<LatticePoint>& a) {
    std::unordered_set<uint64_t> in;
    in.reserve(a.size() * 2);
    for (auto p : a) in.insert(pack_point(p));
    std::unordered_set<uint64_t> seen;
    std::vector<LatticePoint> out;
    for (auto p : a) {
        for (auto d : kSteps) {
            LatticePoint q = p.offset(d[0], d[1]);
            uint64_t key = pack_point(q);
            if (!in.count(key) && seen.insert(key).second) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DomainSpec DomainSpec::disk(double radius, Vec2 center) {
    if (!(radius > 0.0)) throw PreconditionError("disk: radius must be > 0");
    double c2 = center.x * center.x + center.y * center.y;
    if (!(c2 < radius * radius))
        throw PreconditionError("disk: domain must contain the origin");
    DomainSpec s;
    s.kind = Kind::Disk;
    s.radius = radius;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::square(double side, Vec2 center) {
    if (!(side > 0.0)) throw PreconditionError("square: side must be > 0");
    if (!(std::abs(center.x) < side / 2 && std::abs(center.y) < side / 2))
        throw PreconditionError("square: domain must contain the origin");
    DomainSpec s;
    s.kind = Kind::Square;
    s.side = side;
    s.center = center;
    return s;
}

namespace {

// Winding-number point-in-polygon (strict interior).
bool polygon_contains(const std::vector<Vec2>& poly, double px, double py) {
    bool inside = false;
    size_t m = poly.size();
    for (size_t i = 0, j = m - 1; i < m; j = i++) {
        double xi = poly[i].x, yi = poly[i].y;
        double xj = poly[j].x, yj = poly[j].y;
        bool crosses = (yi > py) != (yj > py);
        if (crosses) {
            double t = (py - yi) / (yj - yi);
            double xcross = xi + t * (xj - xi);
            if (px < xcross) inside = !inside;
        }
    }
    return inside;
}

} // namespace

DomainSpec DomainSpec::make_polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3)
        throw PreconditionError("polygon: need at least 3 vertices");
    if (!polygon_contains(vertices, 0.0, 0.0))
        throw PreconditionError("polygon: domain must contain the origin");
    DomainSpec s;
    s.kind = Kind::Polygon;
    s.polygon = std::move(vertices);
    return s;
}

namespace {

struct Box {
    double x0, x1, y0, y1; // closed face [x0,x1] x [y0,y1]
};

// Does the open segment (p,q) enter the open box? Clips to the closed box
// and then checks whether any clipped point is strictly interior, so a
// segment running along a face edge does not count.
bool segment_enters_open_box(Vec2 p, Vec2 q, const Box& b) {
    double dx = q.x - p.x, dy = q.y - p.y;
    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double denom, double numer) {
        if (denom == 0.0) return numer <= 0.0;
        double t = numer / denom;
        if (denom > 0.0) {
            if (t > t1) return false;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return false;
            if (t < t1) t1 = t;
        }
        return true;
    };
    if (!clip(-dx, -(b.x0 - p.x))) return false;
    if (!clip(dx, b.x1 - p.x)) return false;
    if (!clip(-dy, -(b.y0 - p.y))) return false;
    if (!clip(dy, b.y1 - p.y)) return false;
    if (t0 > t1) return false;
    double tm = 0.5 * (t0 + t1);
    double mx = p.x + tm * dx, my = p.y + tm * dy;
    return mx > b.x0 && mx < b.x1 && my > b.y0 && my < b.y1;
}

class FaceClassifier {
  public:
    FaceClassifier(const DomainSpec& spec, int32_t n) : spec_(spec), n_(n) {}

    // Face (i,j) covers [i,i+1] x [j,j+1] at integer scale, i.e. the square
    // of side 1/n at continuum coordinates. Admissible means: face center
    // strictly inside D and the boundary curve of D does not enter the open
    // face. Closed faces that only touch dD along edges or corners stay
    // admissible, which keeps axis-aligned boundaries exactly on grid lines
    // usable.
    bool admissible(int64_t i, int64_t j) const {
        double inv = 1.0 / double(n_);
        Box box{double(i) * inv, double(i + 1) * inv, double(j) * inv,
                double(j + 1) * inv};
        double cx = (double(i) + 0.5) * inv;
        double cy = (double(j) + 0.5) * inv;
        switch (spec_.kind) {
            case DomainSpec::Kind::Disk: {
                double r2 = spec_.radius * spec_.radius;
                double ox = spec_.center.x, oy = spec_.center.y;
                double dcx = cx - ox, dcy = cy - oy;
                if (!(dcx * dcx + dcy * dcy < r2)) return false;
                // nearest/farthest squared distance from circle center to box
                double nx = std::clamp(ox, box.x0, box.x1) - ox;
                double ny = std::clamp(oy, box.y0, box.y1) - oy;
                double min2 = nx * nx + ny * ny;
                double fx = std::max(box.x1 - ox, ox - box.x0);
                double fy = std::max(box.y1 - oy, oy - box.y0);
                double max2 = fx * fx + fy * fy;
                return !(min2 < r2 && r2 < max2);
            }
            case DomainSpec::Kind::Square: {
                double h = spec_.side / 2;
                double ox = spec_.center.x, oy = spec_.center.y;
                if (!(std::abs(cx - ox) < h && std::abs(cy - oy) < h))
                    return false;
                Vec2 c0{ox - h, oy - h}, c1{ox + h, oy - h}, c2{ox + h, oy + h},
                    c3{ox - h, oy + h};
                return !(segment_enters_open_box(c0, c1, box) ||
                         segment_enters_open_box(c1, c2, box) ||
                         segment_enters_open_box(c2, c3, box) ||
                         segment_enters_open_box(c3, c0, box));
            }
            case DomainSpec::Kind::Polygon: {
                if (!polygon_contains(spec_.polygon, cx, cy)) return false;
                size_t m = spec_.polygon.size();
                for (size_t a = 0, b = m - 1; a < m; b = a++) {
                    if (segment_enters_open_box(spec_.polygon[b],
                                                spec_.polygon[a], box))
                        return false;
                }
                return true;
            }
        }
        return false;
    }

    // True when the open edge between two adjacent faces lies on dD; such
    // faces must not be connected through that edge.
    bool edge_on_boundary(double mx, double my) const {
        switch (spec_.kind) {
            case DomainSpec::Kind::Disk: {
                double dx = mx - spec_.center.x, dy = my - spec_.center.y;
                return dx * dx + dy * dy == spec_.radius * spec_.radius;
            }
            case DomainSpec::Kind::Square: {
                double h = spec_.side / 2;
                double ax = std::abs(mx - spec_.center.x);
                double ay = std::abs(my - spec_.center.y);
                return (ax == h && ay <= h) || (ay == h && ax <= h);
            }
            case DomainSpec::Kind::Polygon: {
                size_t m = spec_.polygon.size();
                for (size_t a = 0, b = m - 1; a < m; b = a++) {
                    Vec2 p = spec_.polygon[b], q = spec_.polygon[a];
                    double ux = q.x - p.x, uy = q.y - p.y;
                    double wx = mx - p.x, wy = my - p.y;
                    double cross = ux * wy - uy * wx;
                    if (cross != 0.0) continue;
                    double dot = wx * ux + wy * uy;
                    double len2 = ux * ux + uy * uy;
                    if (dot >= 0.0 && dot <= len2) return true;
                }
                return false;
            }
        }
        return false;
    }

  private:
    const DomainSpec& spec_;
    int32_t n_;
};

double domain_bound(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainSpec::Kind::Disk:
            return std::abs(spec.center.x) + std::abs(spec.center.y) +
                   spec.radius;
        case DomainSpec::Kind::Square:
            return std::abs(spec.center.x) + std::abs(spec.center.y) +
                   spec.side;
        case DomainSpec::Kind::Polygon: {
            double m = 0.0;
            for (auto v : spec.polygon)
                m = std::max(m, std::abs(v.x) + std::abs(v.y));
            return m;
        }
    }
    return 0.0;
}

} // namespace

GridDomain grid_approximation(const DomainSpec& spec, int32_t n) {
    if (n < 1) throw PreconditionError("grid_approximation: scale must be >= 1");
    FaceClassifier cls(spec, n);

    // BFS over admissible faces starting from the four faces at the origin.
    std::unordered_set<uint64_t> visited;
    std::queue<std::pair<int64_t, int64_t>> queue;
    auto face_key = [](int64_t i, int64_t j) {
        return (uint64_t(uint32_t(int32_t(i))) << 32) |
               uint64_t(uint32_t(int32_t(j)));
    };
    for (int64_t i = -1; i <= 0; ++i) {
        for (int64_t j = -1; j <= 0; ++j) {
            if (cls.admissible(i, j)) {
                visited.insert(face_key(i, j));
                queue.push({i, j});
            }
        }
    }
    if (queue.empty())
        throw DomainTooFine(
            "grid_approximation: no admissible face at the origin; increase n");

    double bound = domain_bound(spec) * n + 2;
    double inv = 1.0 / double(n);
    std::vector<std::pair<int64_t, int64_t>> faces;
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop();
        faces.push_back({i, j});
        const std::array<std::array<int64_t, 2>, 4> nbrs = {
            {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
        for (auto [ni, nj] : nbrs) {
            if (std::abs(double(ni)) > bound || std::abs(double(nj)) > bound)
                continue;
            uint64_t key = face_key(ni, nj);
            if (visited.count(key) || !cls.admissible(ni, nj)) continue;
            // midpoint of the shared edge in continuum coordinates
            double mx, my;
            if (ni != i) {
                mx = double(std::max(i, ni)) * inv;
                my = (double(j) + 0.5) * inv;
            } else {
                mx = (double(i) + 0.5) * inv;
                my = double(std::max(j, nj)) * inv;
            }
            if (cls.edge_on_boundary(mx, my)) continue;
            visited.insert(key);
            queue.push({ni, nj});
        }
    }

    std::vector<LatticePoint> verts;
    verts.reserve(faces.size() * 4);
    std::unordered_set<uint64_t> vseen;
    for (auto [i, j] : faces) {
        for (int64_t di = 0; di <= 1; ++di) {
            for (int64_t dj = 0; dj <= 1; ++dj) {
                LatticePoint p{int32_t(i + di), int32_t(j + dj)};
                if (vseen.insert(pack_point(p)).second) verts.push_back(p);
            }
        }
    }
    std::sort(verts.begin(), verts.end());
    return GridDomain(n, std::move(verts));
}

GridDomain::GridDomain(int32_t scale, std::vector<LatticePoint> vertices)
    : scale_(scale), vertices_(std::move(vertices)) {
    if (scale_ < 1) throw PreconditionError("GridDomain: scale must be >= 1");
    if (vertices_.empty())
        throw PreconditionError("GridDomain: vertex set is empty");
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()),
                    vertices_.end());

    min_x_ = max_x_ = vertices_[0].x;
    min_y_ = max_y_ = vertices_[0].y;
    for (auto p : vertices_) {
        min_x_ = std::min(min_x_, p.x);
        max_x_ = std::max(max_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_y_ = std::max(max_y_, p.y);
    }
    stride_ = size_t(max_y_ - min_y_) + 1;
    inside_.assign((size_t(max_x_ - min_x_) + 1) * stride_, 0);
    for (auto p : vertices_) inside_[cell_index(p)] = 1;

    // connectivity under nearest-neighbor adjacency
    std::vector<uint8_t> seen(inside_.size(), 0);
    std::queue<LatticePoint> queue;
    queue.push(vertices_[0]);
    seen[cell_index(vertices_[0])] = 1;
    size_t reached = 1;
    while (!queue.empty()) {
        LatticePoint p = queue.front();
        queue.pop();
        for (auto d : kSteps) {
            LatticePoint q = p.offset(d[0], d[1]);
            if (!contains(q)) continue;
            if (!seen[cell_index(q)]) {
                seen[cell_index(q)] = 1;
                ++reached;
                queue.push(q);
            }
        }
    }
    if (reached != vertices_.size())
        throw PreconditionError("GridDomain: vertex set is not connected");

    boundary_ = boundary(vertices_);
    origin_inside_ = contains({0, 0});
}

bool GridDomain::has_inside_neighbor(LatticePoint p) const {
    for (auto d : kSteps) {
        if (contains(p.offset(d[0], d[1]))) return true;
    }
    return false;
}

std::vector<Edge> GridDomain::interior_edges() const {
    std::vector<Edge> out;
    out.reserve(vertices_.size() * 2);
    for (auto p : vertices_) {
        LatticePoint right = p.offset(1, 0);
        LatticePoint up = p.offset(0, 1);
        if (contains(right)) out.push_back(Edge(p, right));
        if (contains(up)) out.push_back(Edge(p, up));
    }
    return out;
}

} // namespace lerw

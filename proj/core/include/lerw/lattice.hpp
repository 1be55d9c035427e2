#ifndef LERW_LATTICE_HPP
#define LERW_LATTICE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "lerw/errors.hpp"

namespace lerw {

using Complex = std::complex<double>;

struct LatticePoint {
    int32_t x = 0;
    int32_t y = 0;

    friend bool operator==(LatticePoint a, LatticePoint b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(LatticePoint a, LatticePoint b) { return !(a == b); }
    friend bool operator<(LatticePoint a, LatticePoint b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }

    int64_t norm2() const {
        return int64_t(x) * x + int64_t(y) * y;
    }
    LatticePoint offset(int32_t dx, int32_t dy) const {
        return {x + dx, y + dy};
    }
};

inline uint64_t pack_point(LatticePoint p) {
    return (uint64_t(uint32_t(p.x)) << 32) | uint64_t(uint32_t(p.y));
}

inline constexpr std::array<std::array<int32_t, 2>, 4> kSteps = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Undirected lattice edge; endpoints stored with the canonical (smaller)
// one first so that equal edges compare equal.
struct Edge {
    LatticePoint a, b;

    Edge(LatticePoint p, LatticePoint q) {
        if (q < p) std::swap(p, q);
        a = p;
        b = q;
        if ((int64_t(a.x) - b.x) * (int64_t(a.x) - b.x) +
                (int64_t(a.y) - b.y) * (int64_t(a.y) - b.y) !=
            1)
            throw PreconditionError("Edge endpoints must be nearest neighbors");
    }

    // Midpoint z_e; coordinates are exact dyadic values.
    Complex midpoint() const {
        return {0.5 * (double(a.x) + double(b.x)),
                0.5 * (double(a.y) + double(b.y))};
    }

    friend bool operator==(const Edge& e, const Edge& f) {
        return e.a == f.a && e.b == f.b;
    }
};

// B_n = { x in Z^2 : |x| <= n }, enumerated in lexicographic order.
std::vector<LatticePoint> ball(int32_t n);

// Outer boundary of a finite set A: points not in A adjacent to A.
std::vector<LatticePoint> boundary(const std::vector<LatticePoint>& a);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Catalog of continuum domains available for grid approximation.
struct DomainSpec {
    enum class Kind { Disk, Square, Polygon };

    Kind kind = Kind::Disk;
    double radius = 1.0;   // disk
    double side = 2.0;     // square
    Vec2 center;           // disk, square
    std::vector<Vec2> polygon;

    static DomainSpec disk(double radius, Vec2 center = {0.0, 0.0});
    static DomainSpec square(double side, Vec2 center = {0.0, 0.0});
    static DomainSpec make_polygon(std::vector<Vec2> vertices);
};

// Lattice approximation of a continuum domain at spacing 1/scale. Coordinates
// are stored as integers at scale n; rescaling by 1/n happens only when a
// path is embedded as a planar curve.
class GridDomain {
  public:
    GridDomain(int32_t scale, std::vector<LatticePoint> vertices);

    int32_t scale() const { return scale_; }
    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    const std::vector<LatticePoint>& boundary_points() const {
        return boundary_;
    }
    bool origin_inside() const { return origin_inside_; }

    bool contains(LatticePoint p) const {
        if (p.x < min_x_ || p.x > max_x_ || p.y < min_y_ || p.y > max_y_)
            return false;
        return inside_[cell_index(p)] != 0;
    }
    bool on_boundary(LatticePoint p) const {
        if (p.x < min_x_ - 1 || p.x > max_x_ + 1 || p.y < min_y_ - 1 ||
            p.y > max_y_ + 1)
            return false;
        return !contains(p) && has_inside_neighbor(p);
    }

    // Bounding box of the vertex set (inclusive).
    int32_t min_x() const { return min_x_; }
    int32_t max_x() const { return max_x_; }
    int32_t min_y() const { return min_y_; }
    int32_t max_y() const { return max_y_; }

    // Interior undirected edges (both endpoints in the vertex set).
    std::vector<Edge> interior_edges() const;

  private:
    size_t cell_index(LatticePoint p) const {
        return size_t(p.x - min_x_) * stride_ + size_t(p.y - min_y_);
    }
    bool has_inside_neighbor(LatticePoint p) const;

    int32_t scale_;
    std::vector<LatticePoint> vertices_;
    std::vector<LatticePoint> boundary_;
    bool origin_inside_ = false;
    int32_t min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
    size_t stride_ = 0;
    std::vector<uint8_t> inside_;
};

// Grid domain D^n: faces of the 1/n grid entirely inside the domain and not
// crossed by its boundary, connected to a face at the origin; vertices are
// the corners of those faces. Throws DomainTooFine when no face incident to
// the origin qualifies.
GridDomain grid_approximation(const DomainSpec& spec, int32_t n);

} // namespace lerw

#endif

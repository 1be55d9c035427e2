#include "lerw/walk.hpp"

#include <algorithm>
#include <unordered_map>

#include "lerw/errors.hpp"

namespace lerw {

bool LatticePath::is_nearest_neighbor() const {
    for (size_t i = 1; i < points.size(); ++i) {
        int64_t dx = int64_t(points[i].x) - points[i - 1].x;
        int64_t dy = int64_t(points[i].y) - points[i - 1].y;
        if (dx * dx + dy * dy != 1) return false;
    }
    return true;
}

bool LatticePath::is_self_avoiding() const {
    std::unordered_map<uint64_t, int> seen;
    seen.reserve(points.size() * 2);
    for (auto p : points) {
        if (++seen[pack_point(p)] > 1) return false;
    }
    return true;
}

LatticePath sample_srw_to_radius(int32_t n, RngStream& rng) {
    if (n < 1) throw PreconditionError("sample_srw_to_radius: n must be >= 1");
    LatticePath path;
    path.points.push_back({0, 0});
    LatticePoint p{0, 0};
    int64_t n2 = int64_t(n) * n;
    uint64_t steps = 0;
    while (p.norm2() < n2) {
        if (++steps > kStepCap)
            throw StepCapExceeded("sample_srw_to_radius: step cap exceeded");
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        path.points.push_back(p);
    }
    return path;
}

LatticePath sample_srw_in_domain(const GridDomain& dom, RngStream& rng) {
    if (!dom.origin_inside())
        throw PreconditionError("sample_srw_in_domain: origin not in domain");
    LatticePath path;
    LatticePoint p{0, 0};
    path.points.push_back(p);
    uint64_t steps = 0;
    while (dom.contains(p)) {
        if (++steps > kStepCap)
            throw StepCapExceeded("sample_srw_in_domain: step cap exceeded");
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        path.points.push_back(p);
    }
    return path;
}

LatticePath loop_erase(const LatticePath& path) {
    LatticePath out;
    if (path.points.empty()) return out;
    std::unordered_map<uint64_t, size_t> index;
    index.reserve(path.points.size() * 2);
    auto& erased = out.points;
    for (auto p : path.points) {
        auto it = index.find(pack_point(p));
        if (it != index.end()) {
            for (size_t j = it->second + 1; j < erased.size(); ++j)
                index.erase(pack_point(erased[j]));
            erased.resize(it->second + 1);
        } else {
            erased.push_back(p);
            index.emplace(pack_point(p), erased.size() - 1);
        }
    }
    return out;
}

LatticePath reverse_loop_erase(const LatticePath& path) {
    LatticePath rev;
    rev.points.assign(path.points.rbegin(), path.points.rend());
    LatticePath erased = loop_erase(rev);
    std::reverse(erased.points.begin(), erased.points.end());
    return erased;
}

LerwSample sample_lerw(int32_t n, RngStream& rng) {
    LerwSampler sampler;
    const auto& pts = sampler.sample_ball(n, rng);
    LerwSample s;
    s.path.points = pts;
    s.steps = pts.size() - 1;
    s.srw_steps = sampler.srw_steps();
    return s;
}

LerwSample sample_lerw(const GridDomain& dom, RngStream& rng) {
    LerwSampler sampler;
    const auto& pts = sampler.sample_domain(dom, rng);
    LerwSample s;
    s.path.points = pts;
    s.steps = pts.size() - 1;
    s.srw_steps = sampler.srw_steps();
    return s;
}

void LerwSampler::ensure_box(int32_t min_x, int32_t max_x, int32_t min_y,
                             int32_t max_y) {
    bool empty = max_x_ < min_x_;
    if (!empty && min_x >= min_x_ && max_x <= max_x_ && min_y >= min_y_ &&
        max_y <= max_y_)
        return;
    if (empty) {
        min_x_ = min_x;
        max_x_ = max_x;
        min_y_ = min_y;
        max_y_ = max_y;
    } else {
        min_x_ = std::min(min_x_, min_x);
        max_x_ = std::max(max_x_, max_x);
        min_y_ = std::min(min_y_, min_y);
        max_y_ = std::max(max_y_, max_y);
    }
    stride_ = size_t(max_y_ - min_y_) + 1;
    size_t cells = (size_t(max_x_ - min_x_) + 1) * stride_;
    last_.assign(cells, -1);
    stamp_.assign(cells, 0);
    epoch_ = 0;
}

void LerwSampler::bump_epoch() {
    if (epoch_ == UINT32_MAX) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 0;
    }
    ++epoch_;
}

void LerwSampler::erase_reversed_walk() {
    bump_epoch();
    erased_.clear();
    for (size_t i = walk_.size(); i-- > 0;) {
        LatticePoint p = walk_[i];
        size_t c = cell(p);
        int32_t k = (stamp_[c] == epoch_) ? last_[c] : -1;
        if (k >= 0) {
            for (size_t j = size_t(k) + 1; j < erased_.size(); ++j)
                last_[cell(erased_[j])] = -1;
            erased_.resize(size_t(k) + 1);
        } else {
            erased_.push_back(p);
            stamp_[c] = epoch_;
            last_[c] = int32_t(erased_.size() - 1);
        }
    }
}

const std::vector<LatticePoint>& LerwSampler::sample_ball(int32_t n,
                                                          RngStream& rng) {
    if (n < 1) throw PreconditionError("LerwSampler: n must be >= 1");
    ensure_box(-n - 1, n + 1, -n - 1, n + 1);
    walk_.clear();
    LatticePoint p{0, 0};
    walk_.push_back(p);
    int64_t n2 = int64_t(n) * n;
    uint64_t steps = 0;
    while (p.norm2() < n2) {
        if (++steps > kStepCap)
            throw StepCapExceeded("LerwSampler: step cap exceeded");
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        walk_.push_back(p);
    }
    erase_reversed_walk();
    return erased_;
}

const std::vector<LatticePoint>& LerwSampler::sample_domain(
    const GridDomain& dom, RngStream& rng) {
    if (!dom.origin_inside())
        throw PreconditionError("LerwSampler: origin not in domain");
    ensure_box(dom.min_x() - 1, dom.max_x() + 1, dom.min_y() - 1,
               dom.max_y() + 1);
    walk_.clear();
    LatticePoint p{0, 0};
    walk_.push_back(p);
    uint64_t steps = 0;
    while (dom.contains(p)) {
        if (++steps > kStepCap)
            throw StepCapExceeded("LerwSampler: step cap exceeded");
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        walk_.push_back(p);
    }
    erase_reversed_walk();
    return erased_;
}

const std::vector<LatticePoint>& LerwSampler::sample_walk_ball(int32_t n,
                                                               RngStream& rng) {
    if (n < 1) throw PreconditionError("LerwSampler: n must be >= 1");
    aux_walk_.clear();
    LatticePoint p{0, 0};
    aux_walk_.push_back(p);
    int64_t n2 = int64_t(n) * n;
    uint64_t steps = 0;
    while (p.norm2() < n2) {
        if (++steps > kStepCap)
            throw StepCapExceeded("LerwSampler: step cap exceeded");
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        aux_walk_.push_back(p);
    }
    return aux_walk_;
}

} // namespace lerw

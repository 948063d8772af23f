#ifndef TOEPSPEC_CLASSIFY_HPP
#define TOEPSPEC_CLASSIFY_HPP

#include <cmath>
#include <deque>
#include <functional>
#include <optional>

#include "toepspec/riccati.hpp"

namespace toepspec {

enum class CellLabel : unsigned char { EssBand = 0, Resolvent = 1, Spectrum = 2, Unknown = 3 };

inline const char* to_string(CellLabel l) {
    switch (l) {
        case CellLabel::EssBand: return "EssBand";
        case CellLabel::Resolvent: return "Resolvent";
        case CellLabel::Spectrum: return "Spectrum";
        default: return "Unknown";
    }
}

struct ComponentInfo {
    int id = 0;
    cplx representative;
    RiccatiOutcome outcome;
    CellLabel label = CellLabel::Unknown;
    long cells = 0;
    bool touches_edge = false;
};

/// Rasterized classification of the complement of the essential spectrum.
/// Cells near sampled curve points form the EssBand; every remaining
/// 4-connected component carries the verdict of one representative probe.
struct RegionMap {
    double x0 = 0.0, y0 = 0.0; // lower-left corner
    double dx = 0.0, dy = 0.0; // cell size
    int nx = 0, ny = 0;
    std::vector<CellLabel> labels;   // row-major, ny rows of nx
    std::vector<int> component_ids;  // -1 for band cells
    std::vector<ComponentInfo> components;
    bool whole_plane = false;
    std::optional<std::pair<cplx, Verdict>> farfield_probe;

    cplx cell_center(int ix, int iy) const {
        return {x0 + (ix + 0.5) * dx, y0 + (iy + 0.5) * dy};
    }
    CellLabel label_at(int ix, int iy) const {
        return labels[static_cast<size_t>(iy) * static_cast<size_t>(nx) +
                      static_cast<size_t>(ix)];
    }
};

struct ClassifyOptions {
    int grid_n = 400;            // cells along the longer box side
    int dilate = 2;              // band radius in cells
    double inflate = 0.5;        // bounding box inflation fraction
    double min_half = 2.0;       // minimum half-width (4x4 box centered at 0)
    double clip_radius = 3.0;    // cloud points beyond this radius do not grow the box
    int refine_depth = 12;       // adaptive curve refinement recursion limit
    RiccatiOptions riccati;
    EssPointOptions ess;
};

namespace detail {

inline bool cloud_is_conjugate_symmetric(const std::vector<cplx>& pts, double tol) {
    for (const cplx& p : pts) {
        const cplx target = std::conj(p);
        bool found = false;
        for (const cplx& q : pts)
            if (std::abs(q - target) <= tol * std::max(1.0, std::abs(target))) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// Subdivide theta intervals until consecutive curve samples inside the box
// are closer than gap, so the dilated band has no holes a flood fill could
// leak through.
inline void refine_curve(const PencilL& pl, const Realization& r,
                         const EssPointOptions& ess, double th_a, double th_b,
                         const std::vector<cplx>& pts_a, const std::vector<cplx>& pts_b,
                         double gap, int depth,
                         const std::function<bool(cplx)>& in_box,
                         std::vector<cplx>& extra, int& budget) {
    if (depth <= 0 || budget <= 0) return;
    auto needs_split = [&](const std::vector<cplx>& from, const std::vector<cplx>& to) {
        for (const cplx& p : from) {
            if (!in_box(p)) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (const cplx& q : to) nearest = std::min(nearest, std::abs(p - q));
            if (nearest > gap) return true;
        }
        return false;
    };
    if (!needs_split(pts_a, pts_b) && !needs_split(pts_b, pts_a)) return;

    const double th_m = 0.5 * (th_a + th_b);
    EssPointsResult mid;
    try {
        mid = ess_points_at(pl, r, std::polar(1.0, th_m), ess);
    } catch (const Error&) {
        return;
    }
    --budget;
    if (mid.singular) return;
    for (const cplx& p : mid.lambdas)
        if (in_box(p)) extra.push_back(p);
    refine_curve(pl, r, ess, th_a, th_m, pts_a, mid.lambdas, gap, depth - 1, in_box,
                 extra, budget);
    refine_curve(pl, r, ess, th_m, th_b, mid.lambdas, pts_b, gap, depth - 1, in_box,
                 extra, budget);
}

} // namespace detail

/// Classify the connected components of the complement of the sampled
/// essential spectrum. Each component is probed at its cell farthest from
/// the band; Unknown verdicts are retried at three perturbed points before
/// the whole component is labeled Unknown. One far-field point is probed
/// for the dominant edge-touching component.
inline RegionMap classify_components(const EssCloud& cloud, const Realization& r,
                                     const ClassifyOptions& opt = {}) {
    RegionMap map;
    map.whole_plane = cloud.whole_plane;

    // Bounding box: inflate the bbox of the (radius-clipped) cloud, with a
    // minimum 4x4 box centered at the origin. Unbounded spectra make the
    // raw bbox useless, hence the clip.
    std::vector<cplx> pts;
    for (const auto& [th, lam] : cloud.points) pts.push_back(lam);
    double xmin = -opt.min_half, xmax = opt.min_half;
    double ymin = -opt.min_half, ymax = opt.min_half;
    for (const cplx& p : pts) {
        if (std::abs(p) > opt.clip_radius) continue;
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double wx = xmax - xmin, wy = ymax - ymin;
    xmin -= 0.5 * opt.inflate * wx;
    xmax += 0.5 * opt.inflate * wx;
    ymin -= 0.5 * opt.inflate * wy;
    ymax += 0.5 * opt.inflate * wy;
    if (detail::cloud_is_conjugate_symmetric(pts, 1e-9)) {
        const double half = std::max(std::abs(ymin), std::abs(ymax));
        ymin = -half;
        ymax = half;
    }
    // Square cells: the longer side gets grid_n cells.
    const double cell = std::max(xmax - xmin, ymax - ymin) / opt.grid_n;
    map.nx = std::max(8, static_cast<int>(std::ceil((xmax - xmin) / cell)));
    map.ny = std::max(8, static_cast<int>(std::ceil((ymax - ymin) / cell)));
    map.x0 = xmin;
    map.y0 = ymin;
    map.dx = (xmax - xmin) / map.nx;
    map.dy = (ymax - ymin) / map.ny;

    const size_t ncells = static_cast<size_t>(map.nx) * static_cast<size_t>(map.ny);
    if (map.whole_plane) {
        map.labels.assign(ncells, CellLabel::Spectrum);
        map.component_ids.assign(ncells, -1);
        return map;
    }

    map.labels.assign(ncells, CellLabel::Unknown);
    map.component_ids.assign(ncells, -1);
    auto idx = [&](int ix, int iy) {
        return static_cast<size_t>(iy) * static_cast<size_t>(map.nx) +
               static_cast<size_t>(ix);
    };

    // Adaptive curve refinement so the band is gap-free inside the box.
    const PencilL pl = assemble_L(r);
    auto in_box = [&](cplx p) {
        return p.real() >= xmin && p.real() <= xmax && p.imag() >= ymin &&
               p.imag() <= ymax;
    };
    std::vector<cplx> band_pts = pts;
    {
        const double gap =
            0.9 * opt.dilate * std::min(map.dx, map.dy);
        int budget = 64 * static_cast<int>(cloud.thetas.size() + 1);
        std::vector<std::pair<double, std::vector<cplx>>> per_theta;
        for (double th : cloud.thetas) per_theta.emplace_back(th, std::vector<cplx>{});
        for (const auto& [th, lam] : cloud.points) {
            if (std::isnan(th)) continue;
            for (auto& bucket : per_theta)
                if (bucket.first == th) {
                    bucket.second.push_back(lam);
                    break;
                }
        }
        for (size_t i = 0; i + 1 < per_theta.size() && budget > 0; ++i)
            detail::refine_curve(pl, r, opt.ess, per_theta[i].first,
                                 per_theta[i + 1].first, per_theta[i].second,
                                 per_theta[i + 1].second, gap, opt.refine_depth,
                                 in_box, band_pts, budget);
        if (per_theta.size() >= 2 && budget > 0)
            detail::refine_curve(pl, r, opt.ess, per_theta.back().first,
                                 per_theta.front().first + 2.0 * kPi,
                                 per_theta.back().second, per_theta.front().second,
                                 gap, opt.refine_depth, in_box, band_pts, budget);
    }

    // Stamp the dilated band (disc of dilate cells around each sample).
    for (const cplx& p : band_pts) {
        const int cx = static_cast<int>(std::floor((p.real() - map.x0) / map.dx));
        const int cy = static_cast<int>(std::floor((p.imag() - map.y0) / map.dy));
        for (int iy = cy - opt.dilate; iy <= cy + opt.dilate; ++iy)
            for (int ix = cx - opt.dilate; ix <= cx + opt.dilate; ++ix) {
                if (ix < 0 || ix >= map.nx || iy < 0 || iy >= map.ny) continue;
                const int di = ix - cx, dj = iy - cy;
                if (di * di + dj * dj > opt.dilate * opt.dilate) continue;
                map.labels[idx(ix, iy)] = CellLabel::EssBand;
            }
    }

    // Distance to band (multi-source BFS, 4-connected) for representative picks.
    std::vector<int> dist(ncells, -1);
    std::deque<std::pair<int, int>> queue;
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix)
            if (map.labels[idx(ix, iy)] == CellLabel::EssBand) {
                dist[idx(ix, iy)] = 0;
                queue.emplace_back(ix, iy);
            }
    const int step_x[4] = {1, -1, 0, 0};
    const int step_y[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const auto [ix, iy] = queue.front();
        queue.pop_front();
        for (int s = 0; s < 4; ++s) {
            const int jx = ix + step_x[s], jy = iy + step_y[s];
            if (jx < 0 || jx >= map.nx || jy < 0 || jy >= map.ny) continue;
            if (dist[idx(jx, jy)] >= 0) continue;
            dist[idx(jx, jy)] = dist[idx(ix, iy)] + 1;
            queue.emplace_back(jx, jy);
        }
    }

    // Flood fill the complement.
    int n_components = 0;
    for (int iy0 = 0; iy0 < map.ny; ++iy0)
        for (int ix0 = 0; ix0 < map.nx; ++ix0) {
            if (map.labels[idx(ix0, iy0)] == CellLabel::EssBand ||
                map.component_ids[idx(ix0, iy0)] >= 0)
                continue;
            const int cid = n_components++;
            ComponentInfo info;
            info.id = cid;
            int best_dist = -1, best_ix = ix0, best_iy = iy0;
            std::deque<std::pair<int, int>> fill;
            fill.emplace_back(ix0, iy0);
            map.component_ids[idx(ix0, iy0)] = cid;
            while (!fill.empty()) {
                const auto [ix, iy] = fill.front();
                fill.pop_front();
                ++info.cells;
                if (ix == 0 || ix == map.nx - 1 || iy == 0 || iy == map.ny - 1)
                    info.touches_edge = true;
                const int d = dist[idx(ix, iy)] < 0 ? std::numeric_limits<int>::max()
                                                    : dist[idx(ix, iy)];
                if (d > best_dist) {
                    best_dist = d;
                    best_ix = ix;
                    best_iy = iy;
                }
                for (int s = 0; s < 4; ++s) {
                    const int jx = ix + step_x[s], jy = iy + step_y[s];
                    if (jx < 0 || jx >= map.nx || jy < 0 || jy >= map.ny) continue;
                    if (map.labels[idx(jx, jy)] == CellLabel::EssBand) continue;
                    if (map.component_ids[idx(jx, jy)] >= 0) continue;
                    map.component_ids[idx(jx, jy)] = cid;
                    fill.emplace_back(jx, jy);
                }
            }
            info.representative = map.cell_center(best_ix, best_iy);
            map.components.push_back(info);
        }

    // Probe each component; retry Unknown verdicts at perturbed points.
    RiccatiContext ctx = RiccatiContext::build(r, opt.riccati.cond_limit);
    RiccatiOptions ric = opt.riccati;
    ric.context = &ctx;
    for (ComponentInfo& info : map.components) {
        RiccatiOutcome outcome = solve_stabilizing({r, info.representative}, ric);
        if (outcome.verdict == Verdict::Unknown) {
            const double h = 3.0 * std::max(map.dx, map.dy);
            const cplx offsets[3] = {cplx(h, 0.0), cplx(0.0, h), cplx(-h, -h)};
            for (const cplx& off : offsets) {
                const cplx probe = info.representative + off;
                const int ix = static_cast<int>(std::floor((probe.real() - map.x0) / map.dx));
                const int iy = static_cast<int>(std::floor((probe.imag() - map.y0) / map.dy));
                if (ix < 0 || ix >= map.nx || iy < 0 || iy >= map.ny) continue;
                if (map.component_ids[idx(ix, iy)] != info.id) continue;
                const RiccatiOutcome retry = solve_stabilizing({r, probe}, ric);
                if (retry.verdict != Verdict::Unknown) {
                    outcome = retry;
                    break;
                }
            }
        }
        info.outcome = outcome;
        switch (outcome.verdict) {
            case Verdict::Resolvent: info.label = CellLabel::Resolvent; break;
            case Verdict::NotResolvent: info.label = CellLabel::Spectrum; break;
            default: info.label = CellLabel::Unknown; break;
        }
        for (size_t c = 0; c < ncells; ++c)
            if (map.component_ids[c] == info.id) map.labels[c] = info.label;
    }

    // Far-field probe for the dominant edge-touching component.
    const ComponentInfo* outer = nullptr;
    for (const ComponentInfo& info : map.components)
        if (info.touches_edge && (outer == nullptr || info.cells > outer->cells))
            outer = &info;
    if (outer != nullptr) {
        const double box_radius =
            std::max({std::abs(xmin), std::abs(xmax), std::abs(ymin), std::abs(ymax)});
        const double ang = std::arg(outer->representative == cplx(0.0)
                                        ? cplx(1.0)
                                        : outer->representative);
        const cplx far = std::polar(3.0 * box_radius, ang);
        const RiccatiOutcome far_outcome = solve_stabilizing({r, far}, ric);
        map.farfield_probe = std::make_pair(far, far_outcome.verdict);
    }
    return map;
}

} // namespace toepspec

#endif

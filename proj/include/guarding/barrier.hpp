#pragma once
/// @file barrier.hpp
/// @brief Value level sets over attacker-state grids and extraction of the
/// barrier, the zero level set separating the two winning regions.
///
/// The grid samples the analytic Value; the barrier is then refined per grid
/// column by bisection on the analytic Value itself, so contour accuracy is
/// not limited by grid resolution.

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "guarding/finite.hpp"
#include "guarding/io.hpp"

namespace guarding {

/// Labeling half-width around V = 0.
inline constexpr double kEpsValue = 1e-9;

/// Residual bound for refined barrier vertices.
inline constexpr double kBarrierResidual = 1e-8;

enum class Region { AttackerWin, DefenderWin, Barrier, Capture };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::AttackerWin: return "attacker_win";
        case Region::DefenderWin: return "defender_win";
        case Region::Barrier: return "barrier";
        case Region::Capture: return "capture";
    }
    return "?";
}

/// Game-of-kind label for a single state.
inline Region classify(const MovingFrameState& s, const GameParams& p) {
    if (std::abs(s.attacker_x - s.defender_x) < kEpsCapture) return Region::Capture;
    const double v = decide(s, p).value;
    if (v > kEpsValue) return Region::AttackerWin;
    if (v < -kEpsValue) return Region::DefenderWin;
    return Region::Barrier;
}

struct GridSpec {
    double x_min = -0.5, x_max = 1.5;
    double y_min = -1.0, y_max = -0.01;
    int nx = 201, ny = 101;

    [[nodiscard]] double x_at(int i) const {
        return nx == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) / (nx - 1);
    }
    [[nodiscard]] double y_at(int j) const {
        return ny == 1 ? y_min : y_min + (y_max - y_min) * static_cast<double>(j) / (ny - 1);
    }
};

/// Sampled Value and region labels over an attacker-position grid for a fixed
/// defender position. Capture-surface nodes carry V = NaN.
struct LevelSetGrid {
    GameParams params;
    double defender_x = 0.0;
    GridSpec spec;
    std::vector<double> values;    ///< row-major, index j * nx + i
    std::vector<Region> regions;

    [[nodiscard]] double value_at(int i, int j) const { return values[static_cast<size_t>(j) * spec.nx + i]; }
    [[nodiscard]] Region region_at(int i, int j) const { return regions[static_cast<size_t>(j) * spec.nx + i]; }
};

/// Evaluates the finite-target Value at every grid node. Rows above the
/// target line are handled by the mirror reduction inside decide(). Nodes are
/// independent, so the work is split across n_threads with output identical
/// for any thread count.
inline LevelSetGrid value_grid(const GameParams& p, double defender_x, const GridSpec& spec,
                               unsigned n_threads = 1) {
    LevelSetGrid g{p, defender_x, spec, {}, {}};
    const size_t total = static_cast<size_t>(spec.nx) * spec.ny;
    g.values.assign(total, 0.0);
    g.regions.assign(total, Region::Capture);

    const auto eval_rows = [&](int j_begin, int j_end) {
        for (int j = j_begin; j < j_end; ++j) {
            for (int i = 0; i < spec.nx; ++i) {
                const MovingFrameState s{defender_x, spec.x_at(i), spec.y_at(j)};
                const size_t idx = static_cast<size_t>(j) * spec.nx + i;
                if (std::abs(s.attacker_x - s.defender_x) < kEpsCapture) {
                    g.values[idx] = std::numeric_limits<double>::quiet_NaN();
                    g.regions[idx] = Region::Capture;
                    continue;
                }
                const double v = decide(s, p).value;
                g.values[idx] = v;
                g.regions[idx] = v > kEpsValue    ? Region::AttackerWin
                                 : v < -kEpsValue ? Region::DefenderWin
                                                  : Region::Barrier;
            }
        }
    };

    if (n_threads <= 1 || spec.ny < 2) {
        eval_rows(0, spec.ny);
    } else {
        const unsigned workers = std::min<unsigned>(n_threads, static_cast<unsigned>(spec.ny));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const int rows_per = (spec.ny + static_cast<int>(workers) - 1) / static_cast<int>(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const int b = static_cast<int>(w) * rows_per;
            const int e = std::min(spec.ny, b + rows_per);
            if (b >= e) break;
            pool.emplace_back(eval_rows, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return g;
}

/// A refined barrier vertex.
struct BarrierPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Zero-level-set polylines, one per strategy regime (attacker side X > 0 and
/// defender side X < 0), ordered by ascending attacker x.
struct BarrierCurve {
    std::vector<BarrierPoint> defender_ahead;  ///< vertices with X < 0
    std::vector<BarrierPoint> attacker_ahead;  ///< vertices with X > 0
};

/// Brackets sign changes of V along each grid column and refines them by
/// bisection on the analytic Value until |V| <= kBarrierResidual. Throws
/// NoBarrier when no column contains a sign change.
inline BarrierCurve extract_barrier(const LevelSetGrid& g) {
    const GameParams& p = g.params;
    const auto value = [&](double x, double y) {
        return decide(MovingFrameState{g.defender_x, x, y}, p).value;
    };

    BarrierCurve curve;
    for (int i = 0; i < g.spec.nx; ++i) {
        const double x = g.spec.x_at(i);
        if (std::abs(x - g.defender_x) < kEpsCapture) continue;
        for (int j = 0; j + 1 < g.spec.ny; ++j) {
            const double va = g.value_at(i, j);
            const double vb = g.value_at(i, j + 1);
            if (std::isnan(va) || std::isnan(vb)) continue;
            if (va == 0.0 || va * vb >= 0.0) {
                if (std::abs(va) <= kBarrierResidual && std::abs(vb) > kBarrierResidual) {
                    // Node sitting on the barrier itself.
                    const BarrierPoint pt{x, g.spec.y_at(j)};
                    (x > g.defender_x ? curve.attacker_ahead : curve.defender_ahead).push_back(pt);
                }
                continue;
            }
            double lo = g.spec.y_at(j), hi = g.spec.y_at(j + 1);
            double flo = va;
            double mid = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (lo + hi);
                const double fm = value(x, mid);
                if (std::abs(fm) <= kBarrierResidual) break;
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const BarrierPoint pt{x, mid};
            (x > g.defender_x ? curve.attacker_ahead : curve.defender_ahead).push_back(pt);
        }
    }
    if (curve.defender_ahead.empty() && curve.attacker_ahead.empty()) {
        throw NoBarrier("no sign change of the Value inside the grid window");
    }
    return curve;
}

// ---- File formats -------------------------------------------------------------

/// Level-set CSV: header x_A,y_A,V,region; rows ascending in y then x.
/// Capture nodes print V as nan.
inline std::string levelset_csv(const LevelSetGrid& g) {
    std::string out = "x_A,y_A,V,region\n";
    for (int j = 0; j < g.spec.ny; ++j) {
        for (int i = 0; i < g.spec.nx; ++i) {
            const double v = g.value_at(i, j);
            out += fmt(g.spec.x_at(i));
            out += ',';
            out += fmt(g.spec.y_at(j));
            out += ',';
            out += std::isnan(v) ? "nan" : fmt(v);
            out += ',';
            out += region_name(g.region_at(i, j));
            out += '\n';
        }
    }
    return out;
}

/// Barrier CSV: header regime,x_A,y_A; defender-ahead polyline first.
inline std::string barrier_csv(const BarrierCurve& c) {
    std::string out = "regime,x_A,y_A\n";
    const auto emit = [&](const char* regime, const std::vector<BarrierPoint>& pts) {
        for (const BarrierPoint& pt : pts) {
            out += regime;
            out += ',';
            out += fmt(pt.x);
            out += ',';
            out += fmt(pt.y);
            out += '\n';
        }
    };
    emit("defender_ahead", c.defender_ahead);
    emit("attacker_ahead", c.attacker_ahead);
    return out;
}

namespace detail {

struct SvgMapper {
    double x_min, x_scale, y_max, y_scale;
    double px(double x) const { return (x - x_min) * x_scale; }
    double py(double y) const { return (y_max - y) * y_scale; }
};

inline std::string svg_polyline(const SvgMapper& m, const std::vector<BarrierPoint>& pts,
                                const char* style) {
    if (pts.empty()) return {};
    std::string s = "<polyline fill=\"none\" ";
    s += style;
    s += " points=\"";
    for (const BarrierPoint& pt : pts) {
        s += fmt(m.px(pt.x));
        s += ',';
        s += fmt(m.py(pt.y));
        s += ' ';
    }
    s += "\"/>\n";
    return s;
}

}  // namespace detail

/// SVG rendering of a level-set grid with win regions filled per cell and the
/// refined barrier drawn on top. Styling is informational; the coordinate
/// mapping is linear in both axes.
inline std::string levelset_svg(const LevelSetGrid& g, const BarrierCurve* barrier = nullptr,
                                int width = 800) {
    const GridSpec& sp = g.spec;
    const double wx = sp.x_max - sp.x_min;
    const double wy = sp.y_max - sp.y_min;
    const int height = std::max(64, static_cast<int>(width * (wy > 0 ? wy / wx : 0.5)));
    const detail::SvgMapper m{sp.x_min, width / wx, sp.y_max, height / (wy > 0 ? wy : 1.0)};

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                      "\" height=\"" + std::to_string(height) + "\">\n";
    const double cw = wx / std::max(1, sp.nx - 1) * m.x_scale;
    const double ch = wy / std::max(1, sp.ny - 1) * m.y_scale;
    for (int j = 0; j < sp.ny; ++j) {
        for (int i = 0; i < sp.nx; ++i) {
            const char* fill = nullptr;
            switch (g.region_at(i, j)) {
                case Region::AttackerWin: fill = "#f4a6a6"; break;
                case Region::DefenderWin: fill = "#a6c8f4"; break;
                case Region::Barrier: fill = "#222222"; break;
                case Region::Capture: fill = "#dddddd"; break;
            }
            out += "<rect x=\"" + fmt(m.px(sp.x_at(i)) - cw / 2) + "\" y=\"" +
                   fmt(m.py(sp.y_at(j)) - ch / 2) + "\" width=\"" + fmt(cw) + "\" height=\"" +
                   fmt(ch) + "\" fill=\"" + fill + "\"/>\n";
        }
    }
    if (g.params.finite()) {
        out += "<line x1=\"" + fmt(m.px(0.0)) + "\" y1=\"" + fmt(m.py(0.0)) + "\" x2=\"" +
               fmt(m.px(g.params.length)) + "\" y2=\"" + fmt(m.py(0.0)) +
               "\" stroke=\"#006600\" stroke-width=\"3\"/>\n";
    }
    if (barrier) {
        out += detail::svg_polyline(m, barrier->defender_ahead, "stroke=\"#000000\" stroke-width=\"2\"");
        out += detail::svg_polyline(m, barrier->attacker_ahead, "stroke=\"#000000\" stroke-width=\"2\"");
    }
    out += "</svg>\n";
    return out;
}

}  // namespace guarding

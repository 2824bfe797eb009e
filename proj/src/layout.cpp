#include "hexconf/layout.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "hexconf/calculus.hpp"
#include "hexconf/error.hpp"
#include "hexconf/fan.hpp"

namespace hexconf {

namespace {

constexpr std::complex<double> kOmega{0.5, 0.86602540378443864676};

Vec2 left_normal(Vec2 e) { return {-e.y, e.x}; }

// Third vertex z of the counterclockwise triangle (p, q, z), given |pz| and |qz|.
Vec2 apex(Vec2 p, Vec2 q, double pz, double qz)
{
    const Vec2 pq = q - p;
    const double d = norm(pq);
    if (!(d > 0.0)) {
        throw Error(ErrorKind::reflection_impossible, "zero-length base edge");
    }
    const Vec2 e = (1.0 / d) * pq;
    const double along = (pz * pz - qz * qz + d * d) / (2.0 * d);
    double h2 = pz * pz - along * along;
    const double scale = std::max({pz, qz, d});
    if (h2 < 0.0) {
        if (h2 < -1e-9 * scale * scale) {
            throw Error(ErrorKind::reflection_impossible, "edge lengths admit no triangle");
        }
        h2 = 0.0;
    }
    return p + along * e + std::sqrt(h2) * left_normal(e);
}

double polygon_area(const std::vector<Vec2>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        a += cross(poly[i], poly[(i + 1) % poly.size()]);
    }
    return 0.5 * a;
}

double signed_area(const std::array<Vec2, 3>& t) { return 0.5 * cross(t[1] - t[0], t[2] - t[0]); }

bool separated(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b)
{
    for (const auto* t : {&a, &b}) {
        for (std::size_t i = 0; i < 3; ++i) {
            const Vec2 axis = left_normal((*t)[(i + 1) % 3] - (*t)[i]);
            double amin = std::numeric_limits<double>::infinity();
            double amax = -amin;
            double bmin = amin;
            double bmax = -amin;
            for (const auto& p : a) {
                amin = std::min(amin, dot(axis, p));
                amax = std::max(amax, dot(axis, p));
            }
            for (const auto& p : b) {
                bmin = std::min(bmin, dot(axis, p));
                bmax = std::max(bmax, dot(axis, p));
            }
            if (amax <= bmin || bmax <= amin) {
                return true;
            }
        }
    }
    return false;
}

std::vector<LatticeVertex> interior_of(const Ball& b) { return b.interior_vertices(); }

bool faces_valid(const ConformalField& field)
{
    for (const auto& f : field.domain().faces()) {
        const auto vs = f.vertices();
        const GeneralizedTriangle t{field.length(vs[1], vs[2]), field.length(vs[0], vs[2]),
                                    field.length(vs[0], vs[1])};
        if (!is_generalized_triangle(t)) {
            return false;
        }
    }
    return true;
}

struct Box {
    double x0, x1, y0, y1;
};

Box bounds(const std::array<Vec2, 3>& t)
{
    return {std::min({t[0].x, t[1].x, t[2].x}), std::max({t[0].x, t[1].x, t[2].x}),
            std::min({t[0].y, t[1].y, t[2].y}), std::max({t[0].y, t[1].y, t[2].y})};
}

}  // namespace

double LayoutChart::diameter() const
{
    if (placements.empty()) {
        return 0.0;
    }
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& f : faces) {
        for (const auto& p : f.corners) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    return std::hypot(x1 - x0, y1 - y0);
}

bool LayoutChart::positively_oriented(double tol) const
{
    return std::all_of(faces.begin(), faces.end(), [&](const PlacedFace& f) {
        const double scale = std::max({norm(f.corners[1] - f.corners[0]), norm(f.corners[2] - f.corners[1]),
                                       norm(f.corners[0] - f.corners[2])});
        return signed_area(f.corners) >= -tol * scale * scale;
    });
}

LayoutChart develop(const ConformalField& field, LatticeVertex base, int R, double flat_tol)
{
    if (R < 1) {
        throw Error(ErrorKind::domain_error, "develop needs R >= 1");
    }
    const Ball domain(base, R);
    for (const auto& v : domain.vertices()) {
        if (!field.contains(v)) {
            throw Error(ErrorKind::domain_error, "field does not cover the ball");
        }
    }
    for (const auto& v : interior_of(domain)) {
        const double K = curvature(FanConfiguration(field.fan_factors(v)));
        if (std::abs(K) > flat_tol) {
            throw Error(ErrorKind::nonflat_input, "curvature " + std::to_string(K) + " at (" +
                                                      std::to_string(v.m) + "," + std::to_string(v.n) + ")");
        }
    }

    LayoutChart chart;
    std::map<Face, std::size_t> index;
    double max_edge = 0.0;

    auto record = [&](LatticeVertex v, Vec2 p) {
        const auto [it, fresh] = chart.placements.emplace(v, p);
        if (!fresh) {
            const double gap = norm(p - it->second);
            chart.holonomy_defect = std::max(chart.holonomy_defect, gap);
            if (gap > 1e-9 * max_edge) {
                chart.holonomy_log.push_back({v, gap});
            }
        }
    };
    auto add = [&](const Face& f, std::array<Vec2, 3> corners) {
        const auto vs = f.vertices();
        for (std::size_t i = 0; i < 3; ++i) {
            const double metric = field.length(vs[i], vs[(i + 1) % 3]);
            const double placed = norm(corners[(i + 1) % 3] - corners[i]);
            max_edge = std::max(max_edge, metric);
            chart.length_error = std::max(chart.length_error, std::abs(placed - metric) / metric);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            record(vs[i], corners[i]);
        }
        index.emplace(f, chart.faces.size());
        chart.faces.push_back({f, corners});
    };

    const Face first{FaceKind::up, base};
    {
        const auto vs = first.vertices();
        const Vec2 p0{0.0, 0.0};
        const Vec2 p1{field.length(vs[0], vs[1]), 0.0};
        const Vec2 p2 = apex(p0, p1, field.length(vs[0], vs[2]), field.length(vs[1], vs[2]));
        add(first, {p0, p1, p2});
    }

    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const auto current = chart.faces[queue.front()];
        queue.pop_front();
        const auto vs = current.face.vertices();
        for (std::size_t i = 0; i < 3; ++i) {
            const auto x = vs[i];
            const auto y = vs[(i + 1) % 3];
            const Face next = faces_of_edge(x, y)[1];
            if (!domain.contains_face(next) || index.contains(next)) {
                continue;
            }
            // In `next` the edge runs y -> x, followed by the new vertex z.
            const auto nv = next.vertices();
            LatticeVertex z{};
            for (const auto& w : nv) {
                if (w != x && w != y) {
                    z = w;
                }
            }
            const Vec2 pz = apex(current.corners[(i + 1) % 3], current.corners[i], field.length(y, z),
                                 field.length(x, z));
            std::array<Vec2, 3> corners{};
            for (std::size_t k = 0; k < 3; ++k) {
                corners[k] = nv[k] == x ? current.corners[i] : nv[k] == y ? current.corners[(i + 1) % 3] : pz;
            }
            add(next, corners);
            queue.push_back(chart.faces.size() - 1);
        }
    }
    return chart;
}

double triangle_overlap(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b)
{
    auto oriented = [](std::array<Vec2, 3> t) {
        if (signed_area(t) < 0.0) {
            std::swap(t[1], t[2]);
        }
        return t;
    };
    const auto ta = oriented(a);
    const auto tb = oriented(b);
    if (signed_area(ta) <= 0.0 || signed_area(tb) <= 0.0 || separated(ta, tb)) {
        return 0.0;
    }
    std::vector<Vec2> poly(ta.begin(), ta.end());
    for (std::size_t i = 0; i < 3 && !poly.empty(); ++i) {
        const Vec2 p = tb[i];
        const Vec2 q = tb[(i + 1) % 3];
        auto side = [&](Vec2 s) { return cross(q - p, s - p); };
        std::vector<Vec2> out;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Vec2 s = poly[k];
            const Vec2 e = poly[(k + 1) % poly.size()];
            const double ds = side(s);
            const double de = side(e);
            if (ds >= 0.0) {
                out.push_back(s);
            }
            if ((ds >= 0.0) != (de >= 0.0)) {
                const double t = ds / (ds - de);
                out.push_back(s + t * (e - s));
            }
        }
        poly = std::move(out);
    }
    return poly.size() < 3 ? 0.0 : std::max(0.0, polygon_area(poly));
}

std::vector<OverlapPair> overlapping_pairs(const LayoutChart& chart, double threshold)
{
    const auto count = chart.faces.size();
    std::vector<Box> boxes(count);
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) {
        boxes[i] = bounds(chart.faces[i].corners);
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return boxes[a].x0 < boxes[b].x0 || (boxes[a].x0 == boxes[b].x0 && a < b);
    });
    std::vector<OverlapPair> pairs;
    std::vector<std::size_t> active;
    for (const auto i : order) {
        std::erase_if(active, [&](std::size_t j) { return boxes[j].x1 < boxes[i].x0; });
        for (const auto j : active) {
            if (boxes[j].y1 < boxes[i].y0 || boxes[i].y1 < boxes[j].y0) {
                continue;
            }
            const double area = triangle_overlap(chart.faces[i].corners, chart.faces[j].corners);
            if (area > threshold) {
                pairs.push_back({std::min(i, j), std::max(i, j), area});
            }
        }
        active.push_back(i);
    }
    std::sort(pairs.begin(), pairs.end(), [](const OverlapPair& a, const OverlapPair& b) {
        return std::pair{a.first, a.second} < std::pair{b.first, b.second};
    });
    return pairs;
}

OverlapReport overlap_area(const LayoutChart& chart)
{
    OverlapReport report;
    const double d = chart.diameter();
    report.threshold = 1e-12 * d * d;
    const auto pairs = overlapping_pairs(chart, report.threshold);
    report.candidate_pairs = pairs.size();
    for (const auto& p : pairs) {
        if (p.area > report.area) {
            report.area = p.area;
            report.witness = std::pair{chart.faces[p.first].face, chart.faces[p.second].face};
        }
    }
    report.found = report.witness.has_value();
    return report;
}

ConformalField constant_gradient_field(double M, double N, int R)
{
    if (R < 0) {
        throw Error(ErrorKind::domain_error, "radius must be non-negative");
    }
    ConformalField field(ball({0, 0}, R));
    for (const auto& [v, _] : field.values()) {
        field.set(v, M * static_cast<double>(v.m) + N * static_cast<double>(v.n));
    }
    // Every up face is similar to the one at the origin, every down face likewise.
    const bool up = is_generalized_triangle({std::exp(M + N), std::exp(N), std::exp(M)});
    const bool down = is_generalized_triangle({1.0, std::exp(N), std::exp(M)});
    if (!up || !down) {
        throw Error(ErrorKind::infeasible_gradient, "constant gradient leaves the space of triangles");
    }
    return field;
}

double gradient_feasibility_limit(double N, double hi, double tol)
{
    auto feasible = [&](double M) {
        return is_generalized_triangle({std::exp(M + N), std::exp(N), std::exp(M)}) &&
               is_generalized_triangle({1.0, std::exp(N), std::exp(M)});
    };
    double lo = 0.0;
    if (!feasible(lo)) {
        throw Error(ErrorKind::infeasible_gradient, "M = 0 is already infeasible for this N");
    }
    if (feasible(hi)) {
        return hi;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::optional<int> find_overlap_radius(double M, double N, int R_max)
{
    for (int R = 1; R <= R_max; ++R) {
        if (overlap_area(develop(constant_gradient_field(M, N, R), {0, 0}, R)).found) {
            return R;
        }
    }
    return std::nullopt;
}

ConformalField linear_factor_field(std::complex<double> a, double b, int R)
{
    ConformalField field(ball({0, 0}, R));
    for (const auto& [v, _] : field.values()) {
        const std::complex<double> z = static_cast<double>(v.m) + static_cast<double>(v.n) * kOmega;
        field.set(v, (a * z).real() + b);
    }
    return field;
}

double common_curvature(std::complex<double> a)
{
    const auto field = linear_factor_field(a, 0.0, 3);
    const LatticeVertex probes[] = {{0, 0}, {1, 0}, {0, 1}, {-1, -1}};
    std::optional<double> K0;
    for (const auto& v : probes) {
        const FanConfiguration fan(field.fan_factors(v));
        if (!in_T(fan)) {
            throw Error(ErrorKind::infeasible_gradient, "linear field leaves the space of triangles");
        }
        const double K = curvature(fan);
        if (!K0) {
            K0 = K;
        } else if (std::abs(K - *K0) > 1e-10) {
            throw Error(ErrorKind::domain_error, "curvature differs between vertices of a linear field");
        }
    }
    return *K0;
}

LinearLocus flat_linear_locus(std::complex<double> direction, double r_max, double tol, int points)
{
    if (points < 1 || !(r_max >= 0.0)) {
        throw Error(ErrorKind::domain_error, "flat_linear_locus needs points >= 1 and r_max >= 0");
    }
    const std::complex<double> dir = std::abs(direction) > 0.0 ? direction / std::abs(direction) : 1.0;
    auto feasible = [&](double r) {
        return in_T(FanConfiguration(linear_factor_field(r * dir, 0.0, 1).fan_factors({0, 0})));
    };

    LinearLocus locus;
    std::optional<std::pair<double, double>> run;
    std::optional<std::pair<double, double>> prev;  // (r, K) of the previous feasible sample
    for (int k = 0; k <= points; ++k) {
        const double r = r_max * static_cast<double>(k) / static_cast<double>(points);
        if (!feasible(r)) {
            double lo = prev ? prev->first : 0.0;
            double hi = r;
            while (hi - lo > tol && hi - lo > 1e-15) {
                const double mid = 0.5 * (lo + hi);
                (feasible(mid) ? lo : hi) = mid;
            }
            locus.feasible_limit = lo;
            break;
        }
        const double K = common_curvature(r * dir);
        if (std::abs(K) <= tol) {
            locus.flat_samples.push_back(r);
            if (run) {
                run->second = r;
            } else {
                run = std::pair{r, r};
            }
        } else {
            if (run) {
                locus.flat_intervals.push_back(*run);
                run.reset();
            }
            if (prev && std::abs(prev->second) > tol && prev->second * K < 0.0) {
                double lo = prev->first;
                double hi = r;
                double klo = prev->second;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double km = common_curvature(mid * dir);
                    if ((km < 0.0) == (klo < 0.0)) {
                        lo = mid;
                        klo = km;
                    } else {
                        hi = mid;
                    }
                }
                locus.roots.push_back(0.5 * (lo + hi));
            }
        }
        prev = std::pair{r, K};
    }
    if (run) {
        locus.flat_intervals.push_back(*run);
    }
    return locus;
}

ConformalField flatten_interior(const ConformalField& field, const FlattenOptions& opts)
{
    const auto interior = field.domain().interior_vertices();
    std::unordered_map<LatticeVertex, Eigen::Index> slot;
    for (std::size_t i = 0; i < interior.size(); ++i) {
        slot.emplace(interior[i], static_cast<Eigen::Index>(i));
    }
    const auto n = static_cast<Eigen::Index>(interior.size());

    auto residual = [&](const ConformalField& f, Eigen::VectorXd& K) {
        K.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const FanConfiguration fan(f.fan_factors(interior[static_cast<std::size_t>(i)]));
            if (!in_T(fan)) {
                return false;
            }
            K(i) = curvature(fan);
        }
        return true;
    };

    ConformalField current = field;
    Eigen::VectorXd K;
    if (!residual(current, K)) {
        throw Error(ErrorKind::no_root, "starting field leaves the space of triangles");
    }
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double size = n == 0 ? 0.0 : K.cwiseAbs().maxCoeff();
        if (size <= opts.tolerance) {
            return current;
        }
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto v = interior[static_cast<std::size_t>(i)];
            std::vector<double> g;
            try {
                g = curvature_gradient(FanConfiguration(current.fan_factors(v)));
            } catch (const Error&) {
                throw Error(ErrorKind::no_root, "Newton iterate reached a degenerate triangle");
            }
            J(i, i) += g[0];
            const auto nb = neighbors(v);
            for (std::size_t k = 0; k < 6; ++k) {
                if (const auto s = slot.find(nb[k]); s != slot.end()) {
                    J(i, s->second) += g[k + 1];
                }
            }
        }
        const Eigen::VectorXd step = J.partialPivLu().solve(-K);
        double scale = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40 && !accepted; ++halving, scale *= 0.5) {
            ConformalField trial = current;
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto v = interior[static_cast<std::size_t>(i)];
                trial.set(v, current.at(v) + scale * step(i));
            }
            Eigen::VectorXd Kt;
            if (residual(trial, Kt) && Kt.cwiseAbs().maxCoeff() < size) {
                current = std::move(trial);
                K = std::move(Kt);
                accepted = true;
            }
        }
        if (!accepted) {
            if (size <= 100.0 * opts.tolerance) {
                return current;
            }
            throw Error(ErrorKind::no_root, "Newton line search failed");
        }
    }
    if (n > 0 && K.cwiseAbs().maxCoeff() > opts.tolerance) {
        throw Error(ErrorKind::no_root, "Newton did not converge");
    }
    return current;
}

ConformalField random_flat_field(std::mt19937_64& rng, int R, const RandomFieldOptions& opts)
{
    std::uniform_real_distribution<double> noise(-opts.amplitude, opts.amplitude);
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        ConformalField field = constant_gradient_field(opts.M, opts.N, R);
        for (const auto& [v, u] : field.values()) {
            if (hex_distance({0, 0}, v) == R) {
                field.set(v, u + noise(rng));
            }
        }
        if (!faces_valid(field)) {
            continue;
        }
        try {
            field = flatten_interior(field);
        } catch (const Error&) {
            continue;
        }
        bool delaunay = true;
        for (const auto& v : field.domain().interior_vertices()) {
            const FanConfiguration fan(field.fan_factors(v));
            if (!in_D(fan) || min_angle(fan) < 1e-6) {
                delaunay = false;
                break;
            }
        }
        if (delaunay && faces_valid(field)) {
            return field;
        }
    }
    throw Error(ErrorKind::sampling_exhausted, "no flat Delaunay field found");
}

std::string chart_svg(const LayoutChart& chart, const OverlapReport* overlap)
{
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& f : chart.faces) {
        for (const auto& p : f.corners) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, 0.0 - p.y);
            y1 = std::max(y1, 0.0 - p.y);
        }
    }
    if (chart.faces.empty()) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    const double pad = 0.02 * std::max(x1 - x0, y1 - y0);
    char buf[256];
    std::ostringstream out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\">\n", x0 - pad, y0 - pad,
                  x1 - x0 + 2 * pad, y1 - y0 + 2 * pad);
    out << buf;
    auto is_witness = [&](const Face& f) {
        return overlap != nullptr && overlap->witness &&
               (overlap->witness->first == f || overlap->witness->second == f);
    };
    for (const auto& f : chart.faces) {
        out << "<polygon points=\"";
        for (std::size_t i = 0; i < 3; ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i == 0 ? "" : " ", f.corners[i].x + 0.0, 0.0 - f.corners[i].y);
            out << buf;
        }
        if (is_witness(f.face)) {
            out << "\" fill=\"red\" fill-opacity=\"0.6\" stroke=\"black\" vector-effect=\"non-scaling-stroke\"/>\n";
        } else {
            out << "\" fill=\"none\" stroke=\"black\" vector-effect=\"non-scaling-stroke\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hexconf

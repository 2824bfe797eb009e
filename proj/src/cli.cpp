#include "hexconf/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hexconf/calculus.hpp"
#include "hexconf/error.hpp"
#include "hexconf/harmonic.hpp"
#include "hexconf/hyperbolic.hpp"
#include "hexconf/layout.hpp"
#include "hexconf/maxprinciple.hpp"

namespace hexconf {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::invalid_config, what); }

json vertex_json(LatticeVertex v) { return json::array({v.m, v.n}); }

json edge_json(const Edge& e) { return json::array({vertex_json(e.first), vertex_json(e.second)}); }

json face_json(const Face& f)
{
    return {{"kind", f.kind == FaceKind::up ? "up" : "down"}, {"anchor", vertex_json(f.anchor)}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json tolerances_json(const ExperimentConfig& c)
{
    return {{"delaunay", kDelaunayTolerance},
            {"derivative_min_angle", kMinDerivativeAngle},
            {"flat", 1e-8},
            {"overlap_relative", 1e-12},
            {"user", c.tolerance}};
}

bool needs_seed(const ExperimentConfig& c)
{
    switch (c.command) {
        case Command::plane_layout:
        case Command::hyp_lcr:
        case Command::hyp_shear:
        case Command::hyp_dihedral:
        case Command::hyp_reduce: return !c.file.has_value();
        default: return is_randomized(c.command);
    }
}

/// Field from --file, a random flat field from --seed, or a constant gradient.
ConformalField input_field(const ExperimentConfig& c)
{
    if (c.file) {
        return field_from_json(read_json_file(*c.file));
    }
    if (c.seed) {
        std::mt19937_64 rng(*c.seed);
        return random_flat_field(rng, c.radius, {.M = c.M, .N = c.N});
    }
    return constant_gradient_field(c.M, c.N, c.radius);
}

json fan_report(const FanConfiguration& f, double tolerance)
{
    json r;
    r["n"] = f.n();
    r["u"] = std::vector<double>(f.factors().begin(), f.factors().end());
    r["in_T"] = in_T(f);
    if (!in_T(f)) {
        return r;
    }
    r["K"] = curvature(f);
    r["flat"] = std::abs(curvature(f)) <= tolerance;
    r["alpha"] = alphas(f);
    r["delaunay"] = in_D(f);
    r["min_angle"] = min_angle(f);
    try {
        r["curvature_gradient"] = curvature_gradient(f);
    } catch (const Error&) {
        r["curvature_gradient"] = nullptr;
    }
    return r;
}

RunResult fan_check(const ExperimentConfig& c)
{
    return {0, fan_report(fan_from_json(read_json_file(*c.file)), c.tolerance), std::nullopt};
}

RunResult fan_solve(const ExperimentConfig& c)
{
    const auto f = fan_from_json(read_json_file(*c.file));
    SolveOptions opts;
    opts.target = c.target;
    opts.tolerance = std::min(c.tolerance, 1e-12);
    const auto solved = solve_flat(f, c.j, opts);
    json r;
    r["j"] = c.j;
    r["target"] = c.target;
    r["input"] = fan_to_json(f);
    r["solution"] = fan_report(solved, c.tolerance);
    return {0, r, std::nullopt};
}

RunResult fan_sample(const ExperimentConfig& c)
{
    std::mt19937_64 rng(*c.seed);
    json fans = json::array();
    std::uint64_t attempts = 0;
    for (std::uint64_t t = 0; t < c.trials; ++t) {
        const auto outcome = sample_D0(rng, c.n);
        attempts += static_cast<std::uint64_t>(outcome.attempts);
        fans.push_back(fan_to_json(outcome.fan));
    }
    return {0, {{"fans", fans}, {"attempts", attempts}}, std::nullopt};
}

RunResult calculus_fdcheck(const ExperimentConfig& c)
{
    const auto r = fd_check(*c.seed, c.trials, c.n);
    const bool ok = r.max_angle_error < 1e-6 && r.max_gradient_error < 1e-6 && r.max_row_sum < 1e-10 &&
                    r.max_gradient_sum < 1e-10;
    return {ok ? 0 : 1,
            {{"trials", r.trials},
             {"max_angle_error", r.max_angle_error},
             {"max_gradient_error", r.max_gradient_error},
             {"max_row_sum", r.max_row_sum},
             {"max_gradient_sum", r.max_gradient_sum},
             {"passed", ok}},
            std::nullopt};
}

RunResult maxprin_flow(const ExperimentConfig& c)
{
    const auto r = flow_stress(*c.seed, c.trials, c.n, c.n);
    return {r.passed() ? 0 : 1,
            {{"trials", r.trials},
             {"sampling_failures", r.sampling_failures},
             {"stops", {{"factor_saturation", r.saturation},
                        {"triangle_degeneration", r.degeneration},
                        {"max_time", r.max_time}}},
             {"step_failures", r.step_failures},
             {"direction_failures", r.direction_failures},
             {"alpha_decreases", r.alpha_decreases},
             {"max_drift", r.max_drift},
             {"min_initial_X", r.min_initial_X},
             {"passed", r.passed()}},
            std::nullopt};
}

RunResult maxprin_verify(const ExperimentConfig& c)
{
    const auto upper = fan_from_json(read_json_file(*c.file));
    const auto lower = fan_from_json(read_json_file(*c.file2));
    const auto check = check_max_principle(upper, lower, c.tolerance);
    if (!check.verdict) {
        std::string what = "hypotheses fail:";
        for (const auto& v : check.violations) {
            what += " " + v + ";";
        }
        throw Error(ErrorKind::precondition_violation, what);
    }
    json r{{"verdict", to_string(*check.verdict)}, {"max_difference", check.max_difference}};
    return {*check.verdict == Verdict::counterexample ? 1 : 0, r, std::nullopt};
}

RunResult maxprin_search(const ExperimentConfig& c)
{
    SearchOptions opts;
    opts.tol = c.tolerance;
    const auto r = search_counterexample(*c.seed, c.trials, c.n, opts);
    json examples = json::array();
    for (const auto& ce : r.counterexamples) {
        examples.push_back({{"trial", ce.trial}, {"upper", fan_to_json(ce.upper)}, {"lower", fan_to_json(ce.lower)}});
    }
    json report{{"trials", r.trials},
                {"n", r.n},
                {"samples", r.samples},
                {"sampling_failures", r.sampling_failures},
                {"constructions", r.constructions},
                {"unsolvable", r.unsolvable},
                {"precondition_violations", r.precondition_violations},
                {"equal_verdicts", r.equal_verdicts},
                {"feasible_constructions", r.feasible_constructions},
                {"min_deficit", optional_json(r.min_deficit)},
                {"closest_feasible", optional_json(r.closest_feasible)},
                {"counterexamples", examples}};
    return {r.counterexamples.empty() ? 0 : 1, report, std::nullopt};
}

RunResult harmonic_weights(const ExperimentConfig& c)
{
    std::array<double, 6> a{};
    std::copy(c.values.begin(), c.values.end(), a.begin());
    double M = c.M;
    if (M <= 0.0) {
        for (double x : a) {
            M = std::max(M, std::abs(x));
        }
    }
    const auto cert = average_weights(std::span<const double, 6>(a), c.eps, M);
    double sum = 0.0;
    double moment = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        sum += cert.weights[i];
        moment += cert.weights[i] * a[i];
    }
    return {0,
            {{"a", a},
             {"M", M},
             {"weights", cert.weights},
             {"floor", cert.floor},
             {"bound", cert.bound},
             {"sum", sum},
             {"moment", moment}},
            std::nullopt};
}

std::vector<double> eps_grid(const ExperimentConfig& c)
{
    return c.eps_grid.empty() ? std::vector<double>{0.05, 0.1, 0.2} : c.eps_grid;
}

RunResult harmonic_estimate(const ExperimentConfig& c)
{
    const auto grid = eps_grid(c);
    const auto estimates = estimate_harmonic_factors(grid, c.trials, *c.seed);
    json rows = json::array();
    std::uint64_t anomalies = 0;
    for (const auto& e : estimates) {
        anomalies = std::max(anomalies, e.anomalies);
        rows.push_back({{"eps", e.eps},
                        {"m", optional_json(e.factor)},
                        {"quasi_harmonic", e.quasi_harmonic},
                        {"close", e.close},
                        {"anomalies", e.anomalies}});
    }
    return {anomalies == 0 ? 0 : 1, {{"samples", c.trials}, {"estimates", rows}}, std::nullopt};
}

RunResult harmonic_window(const ExperimentConfig& c)
{
    const auto field = input_field(c);
    // Step-function factor estimated on a dyadic grid below eps.
    std::vector<double> grid;
    for (int k = 0; k <= 2 * c.radius + 2; ++k) {
        grid.push_back(c.eps * std::ldexp(1.0, -k));
    }
    std::sort(grid.begin(), grid.end());
    const auto estimates = estimate_harmonic_factors(grid, c.trials, *c.seed);
    std::vector<std::pair<double, double>> table;
    for (const auto& e : estimates) {
        if (e.factor) {
            table.emplace_back(e.eps, *e.factor);
        }
    }
    if (table.empty()) {
        throw Error(ErrorKind::sampling_exhausted, "no quasi-harmonic pairs observed for the factor table");
    }
    const auto m_fn = tabulated_factor(table);
    json r{{"eps", c.eps}, {"R", c.radius}, {"field_radius", field.domain().radius()}};
    try {
        const auto w = find_uniform_window(field, c.eps, c.radius, m_fn);
        r["window"] = {{"center", vertex_json(w.center)},
                       {"M", w.M},
                       {"N", w.N},
                       {"anchor", vertex_json(w.anchor)},
                       {"anchor_gap", w.anchor_gap},
                       {"layer", w.layer},
                       {"layers_allowed", w.layers_allowed},
                       {"delta", w.delta},
                       {"delta1", w.delta1},
                       {"deviation_one", w.deviation_one},
                       {"deviation_omega", w.deviation_omega},
                       {"within_eps", w.within(c.eps)}};
    } catch (const DomainTooSmall& e) {
        r["window"] = nullptr;
        r["required_radius"] = e.required_radius();
    }
    return {0, r, std::nullopt};
}

json chart_summary(const LayoutChart& chart)
{
    json log = json::array();
    for (const auto& h : chart.holonomy_log) {
        log.push_back({{"vertex", vertex_json(h.vertex)}, {"mismatch", h.mismatch}});
    }
    return {{"faces", chart.faces.size()},
            {"holonomy_defect", chart.holonomy_defect},
            {"holonomy_log", log},
            {"length_error", chart.length_error},
            {"diameter", chart.diameter()},
            {"positively_oriented", chart.positively_oriented(1e-12)}};
}

json overlap_json(const OverlapReport& o)
{
    json r{{"found", o.found}, {"area", o.area}, {"threshold", o.threshold}, {"pairs", o.candidate_pairs}};
    r["witness"] = o.witness ? json::array({face_json(o.witness->first), face_json(o.witness->second)})
                             : json(nullptr);
    return r;
}

RunResult plane_layout(const ExperimentConfig& c)
{
    const auto field = input_field(c);
    const auto R = static_cast<int>(field.domain().radius());
    const auto chart = develop(field, field.domain().center(), R);
    const auto overlap = overlap_area(chart);
    json r{{"radius", R}, {"chart", chart_summary(chart)}, {"overlap", overlap_json(overlap)}};
    std::optional<std::string> svg;
    if (c.svg) {
        svg = chart_svg(chart, &overlap);
    }
    return {0, r, svg};
}

RunResult plane_overlap(const ExperimentConfig& c)
{
    const auto R = find_overlap_radius(c.M, c.N, c.rmax);
    json r{{"M", c.M}, {"N", c.N}, {"rmax", c.rmax}};
    std::optional<std::string> svg;
    if (!R) {
        r["radius"] = nullptr;
        return {0, r, svg};
    }
    const auto chart = develop(constant_gradient_field(c.M, c.N, *R), {0, 0}, *R);
    const auto overlap = overlap_area(chart);
    r["radius"] = *R;
    r["chart"] = chart_summary(chart);
    r["overlap"] = overlap_json(overlap);
    if (c.svg) {
        svg = chart_svg(chart, &overlap);
    }
    return {0, r, svg};
}

RunResult plane_linear(const ExperimentConfig& c)
{
    const std::complex<double> a{c.M, c.N};
    if (std::abs(a) == 0.0) {
        invalid("plane linear needs a nonzero direction (M, N)");
    }
    const auto locus = flat_linear_locus(a, static_cast<double>(c.rmax), c.tolerance);
    json intervals = json::array();
    for (const auto& [lo, hi] : locus.flat_intervals) {
        intervals.push_back({lo, hi});
    }
    return {0,
            {{"direction", {c.M, c.N}},
             {"r_max", c.rmax},
             {"flat_samples", locus.flat_samples.size()},
             {"flat_intervals", intervals},
             {"roots", locus.roots},
             {"feasible_limit", optional_json(locus.feasible_limit)}},
            std::nullopt};
}

RunResult hyp_lcr(const ExperimentConfig& c)
{
    const auto metric = EdgeMetric::from_field(input_field(c));
    json edges = json::array();
    for (const auto& [i, j] : metric.interior_edges()) {
        const double lcr = length_cross_ratio(metric, i, j);
        edges.push_back({{"edge", edge_json({i, j})}, {"lcr", lcr}, {"shear", std::log(lcr)}});
    }
    return {0, {{"edges", edges}}, std::nullopt};
}

RunResult hyp_shear(const ExperimentConfig& c)
{
    const auto metric = EdgeMetric::from_field(input_field(c));
    json sums = json::array();
    double worst = 0.0;
    for (const auto& v : metric.domain().interior_vertices()) {
        const double s = vertex_shear_sum(metric, v);
        worst = std::max(worst, std::abs(s));
        sums.push_back({{"vertex", vertex_json(v)}, {"sum", s}});
    }
    const bool ok = worst <= 1e-10;
    return {ok ? 0 : 1, {{"vertices", sums}, {"max_abs_sum", worst}, {"passed", ok}}, std::nullopt};
}

RunResult hyp_dihedral(const ExperimentConfig& c)
{
    const auto field = input_field(c);
    const auto chart = develop(field, field.domain().center(), static_cast<int>(field.domain().radius()));
    json edges = json::array();
    double worst = 0.0;
    std::uint64_t nonempty = 0;
    for (const auto& d : decorate_chart(chart, field)) {
        worst = std::max(worst, std::abs(d.phi - d.alpha));
        nonempty += d.empty_circles ? 0 : 1;
        edges.push_back({{"edge", edge_json(d.edge)},
                         {"lcr", d.lcr},
                         {"shear", d.shear},
                         {"alpha", d.alpha},
                         {"phi", d.phi},
                         {"empty_circles", d.empty_circles}});
    }
    const bool ok = worst < 1e-9;
    return {ok ? 0 : 1,
            {{"edges", edges}, {"max_phi_alpha_gap", worst}, {"non_empty_circles", nonempty}, {"passed", ok}},
            std::nullopt};
}

RunResult hyp_reduce(const ExperimentConfig& c)
{
    const auto field = input_field(c);
    const auto chart = develop(field, field.domain().center(), static_cast<int>(field.domain().radius()));
    json r;
    try {
        const auto red = reduced_decomposition(chart, c.tolerance);
        json erased = json::array();
        for (const auto& e : red.erased) {
            erased.push_back(edge_json(e));
        }
        json faces = json::array();
        for (const auto& f : red.faces) {
            if (f.faces.size() < 2) {
                continue;
            }
            json vs = json::array();
            for (const auto& v : f.vertices) {
                vs.push_back(vertex_json(v));
            }
            faces.push_back({{"triangles", f.faces.size()},
                             {"vertices", vs},
                             {"concyclicity_residual", f.concyclicity_residual}});
        }
        r = {{"erased", erased}, {"merged_faces", faces}, {"total_faces", red.faces.size()}};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::concyclicity_violation) {
            throw;
        }
        return {1, {{"anomaly", e.what()}}, std::nullopt};
    }
    return {0, r, std::nullopt};
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::invalid_config, "cannot write " + path);
    }
    out << text;
}

}  // namespace

std::string_view to_string(Command c) noexcept
{
    switch (c) {
        case Command::fan_check: return "fan check";
        case Command::fan_solve: return "fan solve";
        case Command::fan_sample: return "fan sample";
        case Command::calculus_fdcheck: return "calculus fdcheck";
        case Command::maxprin_flow: return "maxprin flow";
        case Command::maxprin_verify: return "maxprin verify";
        case Command::maxprin_search: return "maxprin search";
        case Command::harmonic_weights: return "harmonic weights";
        case Command::harmonic_estimate: return "harmonic estimate";
        case Command::harmonic_window: return "harmonic window";
        case Command::plane_layout: return "plane layout";
        case Command::plane_overlap: return "plane overlap";
        case Command::plane_linear: return "plane linear";
        case Command::hyp_lcr: return "hyp lcr";
        case Command::hyp_shear: return "hyp shear";
        case Command::hyp_dihedral: return "hyp dihedral";
        case Command::hyp_reduce: return "hyp reduce";
    }
    return "unknown";
}

bool is_randomized(Command c) noexcept
{
    switch (c) {
        case Command::fan_sample:
        case Command::calculus_fdcheck:
        case Command::maxprin_flow:
        case Command::maxprin_search:
        case Command::harmonic_estimate:
        case Command::harmonic_window: return true;
        default: return false;
    }
}

void validate(const ExperimentConfig& c)
{
    if (needs_seed(c) && !c.seed) {
        invalid(std::string(to_string(c.command)) + " needs --seed");
    }
    if (c.trials == 0) {
        invalid("--trials must be positive");
    }
    if (!(c.tolerance > 0.0)) {
        invalid("--tolerance must be positive");
    }
    if (c.radius < 1) {
        invalid("--radius must be at least 1");
    }
    if (c.n < 3) {
        invalid("--n must be at least 3");
    }
    if (c.rmax < 1) {
        invalid("--rmax must be at least 1");
    }
    if (!(c.eps > 0.0)) {
        invalid("--eps must be positive");
    }
    for (double e : c.eps_grid) {
        if (!(e > 0.0)) {
            invalid("--eps-grid entries must be positive");
        }
    }
    switch (c.command) {
        case Command::fan_check:
        case Command::fan_solve:
            if (!c.file) {
                invalid(std::string(to_string(c.command)) + " needs --file");
            }
            break;
        case Command::maxprin_verify:
            if (!c.file || !c.file2) {
                invalid("maxprin verify needs --file (upper) and --file2 (lower)");
            }
            break;
        case Command::maxprin_flow:
            if (c.n < 4) {
                invalid("maxprin flow needs --n >= 4");
            }
            break;
        case Command::harmonic_weights:
            if (c.values.size() != 6) {
                invalid("harmonic weights needs six --values");
            }
            break;
        default: break;
    }
}

RunResult run(const ExperimentConfig& config)
{
    validate(config);
    RunResult result;
    switch (config.command) {
        case Command::fan_check: result = fan_check(config); break;
        case Command::fan_solve: result = fan_solve(config); break;
        case Command::fan_sample: result = fan_sample(config); break;
        case Command::calculus_fdcheck: result = calculus_fdcheck(config); break;
        case Command::maxprin_flow: result = maxprin_flow(config); break;
        case Command::maxprin_verify: result = maxprin_verify(config); break;
        case Command::maxprin_search: result = maxprin_search(config); break;
        case Command::harmonic_weights: result = harmonic_weights(config); break;
        case Command::harmonic_estimate: result = harmonic_estimate(config); break;
        case Command::harmonic_window: result = harmonic_window(config); break;
        case Command::plane_layout: result = plane_layout(config); break;
        case Command::plane_overlap: result = plane_overlap(config); break;
        case Command::plane_linear: result = plane_linear(config); break;
        case Command::hyp_lcr: result = hyp_lcr(config); break;
        case Command::hyp_shear: result = hyp_shear(config); break;
        case Command::hyp_dihedral: result = hyp_dihedral(config); break;
        case Command::hyp_reduce: result = hyp_reduce(config); break;
    }
    json report{{"command", to_string(config.command)},
                {"version", kVersion},
                {"config", config_to_json(config)},
                {"tolerances", tolerances_json(config)},
                {"result", std::move(result.report)},
                {"status", result.exit_code == 0 ? "ok" : "anomaly"}};
    result.report = std::move(report);
    if (config.output) {
        write_text(*config.output, dump_report(result.report));
    }
    if (config.svg && result.svg) {
        write_text(*config.svg, *result.svg);
    }
    return result;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

json config_to_json(const ExperimentConfig& c)
{
    auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
    return {{"command", to_string(c.command)},
            {"seed", c.seed ? json(*c.seed) : json(nullptr)},
            {"trials", c.trials},
            {"tolerance", c.tolerance},
            {"radius", c.radius},
            {"n", c.n},
            {"j", c.j},
            {"target", c.target},
            {"M", c.M},
            {"N", c.N},
            {"rmax", c.rmax},
            {"eps", c.eps},
            {"eps_grid", c.eps_grid},
            {"values", c.values},
            {"file", opt(c.file)},
            {"file2", opt(c.file2)},
            {"output", opt(c.output)},
            {"svg", opt(c.svg)}};
}

FanConfiguration fan_from_json(const json& j)
{
    try {
        const int n = j.at("n").get<int>();
        auto u = j.at("u").get<std::vector<double>>();
        if (n < 3) {
            invalid("fan needs n >= 3");
        }
        if (u.size() == static_cast<std::size_t>(n)) {
            u.insert(u.begin(), 0.0);
        } else if (u.size() != static_cast<std::size_t>(n) + 1) {
            invalid("fan u must hold n or n + 1 factors");
        }
        FanConfiguration fan(u);
        if (j.value("u0_normalized", false)) {
            fan = fan.normalized();
        }
        return fan;
    } catch (const json::exception& e) {
        invalid(std::string("malformed fan: ") + e.what());
    }
}

json fan_to_json(const FanConfiguration& fan)
{
    return {{"n", fan.n()},
            {"u", std::vector<double>(fan.factors().begin(), fan.factors().end())},
            {"u0_normalized", fan.center() == 0.0}};
}

ConformalField field_from_json(const json& j)
{
    try {
        const int R = j.at("radius").get<int>();
        if (R < 1) {
            invalid("field radius must be at least 1");
        }
        ConformalField field(ball({0, 0}, R));
        std::set<LatticeVertex> seen;
        for (const auto& f : j.at("factors")) {
            const LatticeVertex v{f.at("m").get<std::int64_t>(), f.at("n").get<std::int64_t>()};
            if (!field.contains(v)) {
                invalid("factor outside B(0, radius)");
            }
            if (!seen.insert(v).second) {
                invalid("duplicate factor");
            }
            field.set(v, f.at("u").get<double>());
        }
        if (seen.size() != field.values().size()) {
            invalid("field file misses vertices of the ball");
        }
        return field;
    } catch (const json::exception& e) {
        invalid(std::string("malformed field: ") + e.what());
    }
}

json field_to_json(const ConformalField& field)
{
    json factors = json::array();
    for (const auto& [v, u] : field.values()) {
        factors.push_back({{"m", v.m}, {"n", v.n}, {"u", u}});
    }
    return {{"radius", field.domain().radius()}, {"factors", factors}};
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        invalid("cannot read " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        invalid(path + ": " + e.what());
    }
}

}  // namespace hexconf

#include "singma/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <ostream>
#include <optional>
#include <sstream>

#include "singma/analysis.hpp"
#include "singma/barriers.hpp"
#include "singma/verify.hpp"

namespace singma {

const std::map<std::string, std::string>& config_defaults() {
    static const std::map<std::string, std::string> d{
        {"seed", "1"},
        {"output.dir", "."},
        {"output.prefix", ""},
        {"domain.kind", "parabola_cap"},
        {"domain.n", "2"},
        {"domain.t", "1"},
        {"domain.gamma", "0"},
        {"domain.radius", "1"},
        {"domain.faces", ""},
        {"rhs.kind", "power"},
        {"rhs.p", "1"},
        {"rhs.q", "0"},
        {"rhs.k", "1"},
        {"rhs.scale", "1"},
        {"solver.h", "0.015625"},
        {"solver.stencil", "8"},
        {"solver.eps0", "auto"},
        {"solver.eps_ratio", "0.5"},
        {"solver.eps_floor", "1e-8"},
        {"solver.damping", "auto"},
        {"solver.tol", "1e-7"},
        {"solver.max_iter", "2000"},
        {"solver.inner", "newton"},
        {"solver.omega", "1"},
        {"solver.nested", "true"},
        {"solver.coarsest_h", "0.0625"},
        {"solver.gap_floor", "1e-8"},
        {"fit.source", "solution"},
        {"fit.dist_min", "auto"},
        {"fit.dist_max", "auto"},
        {"fit.count", "40"},
        {"fit.tolerance", "auto"},
        {"verify.family", "power"},
        {"verify.n", "2"},
        {"verify.p", "1"},
        {"verify.k", "1"},
        {"verify.gamma", "0.5"},
        {"verify.alpha", "0.5"},
        {"verify.diam", "2"},
        {"verify.samples", "10000"},
        {"verify.margin", "1e-3"},
        {"compare.lower", "sub_valpha"},
        {"compare.upper", "solution"},
        {"compare.samples", "10000"},
        {"compare.tolerance", "0"},
        {"bootstrap.n", "3"},
        {"bootstrap.q", "1"},
        {"bootstrap.steps", "10"},
        {"bootstrap.target", "auto"},
        {"acceptance.criteria", "1,2,3,4,5,6,7,8,9,10,11"},
    };
    return d;
}

namespace {

bool is_auto(const Config& cfg, const std::string& key) { return !cfg.has(key) || cfg.text(key, "") == "auto"; }

double real_or(const Config& cfg, const std::string& key, double fallback) {
    return is_auto(cfg, key) ? fallback : cfg.real(key, fallback);
}

std::vector<Halfspace> parse_faces(const std::string& text, int n) {
    std::vector<Halfspace> faces;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        std::istringstream f(item);
        std::vector<double> v;
        double x;
        while (f >> x) v.push_back(x);
        if (v.empty()) continue;
        if (static_cast<int>(v.size()) != n + 1) {
            throw ConfigError("domain.faces", "each face needs " + std::to_string(n) + " normal components and an offset");
        }
        Halfspace h;
        h.normal = Vec::Map(v.data(), n);
        h.offset = v[n];
        faces.push_back(h);
    }
    return faces;
}

const std::vector<std::string> kBarrierNames{"sub_valpha", "super_w",      "super_w2",     "super_wt",
                                             "sub_valpha_k", "super_wk", "explicit_p1", "explicit_ujl"};

/// Barrier matched to the configured domain and right-hand side.
Barrier barrier_from_config(const std::string& name, const Config& cfg) {
    const Domain dom = domain_from_config(cfg);
    const int n = dom.dim();
    const double p = cfg.real("rhs.p", 1.0);
    const double k = cfg.real("rhs.k", 1.0);
    const double gamma = cfg.real("domain.gamma", 0.0);
    if (name == "sub_valpha") return sub_valpha_for(n, p, dom.diameter());
    if (name == "super_w") return super_w(n, p);
    if (name == "super_w2") return super_w2(n, p);
    if (name == "super_wt") return super_wt(n, p, cfg.real("domain.t", 1.0));
    if (name == "sub_valpha_k") {
        const OriginInfo o = dom.contains_origin_interior();
        if (!o.interior) throw ConfigError("domain.gamma", "must be > 0 for sub_valpha_k");
        return sub_valpha_k(n, k, gamma, o.gamma0, dom.diameter());
    }
    if (name == "super_wk") return super_wk(n, k, gamma);
    if (name == "explicit_p1") return explicit_solution(BarrierKind::ExplicitP1, n);
    return explicit_solution(BarrierKind::ExplicitUJL, n);
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

struct Output {
    std::string dir;
    std::string prefix;
    std::vector<std::string> files;

    void write(const CsvTable& t, const std::string& suffix, std::ostream& log) {
        const std::string path = join_path(dir, prefix + suffix + ".csv");
        write_csv(t, path);
        files.push_back(path);
        log << "wrote " << path << "\n";
    }
};

double expected_exponent(const RhsSpec& rhs, int n) {
    switch (rhs.kind) {
        case RhsSpec::Kind::PowerSingular: return singular_exponent(n, rhs.parameter);
        case RhsSpec::Kind::AffineSphere: return affine_exponent(n, rhs.parameter);
        case RhsSpec::Kind::Degenerate: return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// ---- subcommands ----

int cmd_verify(const Config& cfg, Output& out, std::ostream& log) {
    VerifyOptions opt;
    opt.samples = static_cast<int>(cfg.integer("verify.samples", 10000));
    opt.seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    opt.margin = cfg.real("verify.margin", 1e-3);
    const int n = static_cast<int>(cfg.integer("verify.n", 2));
    const std::string family = cfg.text("verify.family", "power");
    std::vector<CheckRow> rows;
    if (family == "power") {
        rows = verify_power_family(n, cfg.real("verify.p", 1.0), opt);
    } else if (family == "affine") {
        rows = verify_affine_family(n, cfg.real("verify.k", 1.0), cfg.real("verify.gamma", 0.5), opt);
    } else {
        const Barrier b = sub_valpha(n, cfg.real("verify.alpha", 0.5), cfg.real("verify.diam", 2.0));
        VerifyOptions fd = opt;
        fd.samples = std::max(1, opt.samples / 10);
        rows = {check_pde_inequality(b, opt), check_convexity(b, opt), check_boundary(b, opt), check_fd_jet(b, fd),
                check_fd_det(b, fd)};
    }
    CsvTable t;
    t.header = {"barrier", "check", "samples", "worst_margin", "pass"};
    bool pass = true;
    for (const auto& r : rows) {
        t.add_row({r.barrier, r.check, std::to_string(r.samples), csv_number(r.worst_margin), csv_bool(r.pass)});
        pass = pass && r.pass;
    }
    out.write(t, "", log);
    log << rows.size() << " checks, " << (pass ? "all pass" : "failures present") << "\n";
    return pass ? 0 : 1;
}

CsvTable solution_summary(const Domain& dom, const DiscreteSolution& s) {
    CsvTable t;
    t.header = {"domain",    "rhs",          "parameter",     "h",        "nodes",    "iterations",
                "newton_steps", "sweeps",    "eps_final",     "last_update", "residual_norm", "sup_norm",
                "min_second_difference", "gap_floor_active"};
    t.add_row({dom.name(), s.rhs.name(), csv_number(s.rhs.parameter), csv_number(s.grid.h), std::to_string(s.grid.size()),
               std::to_string(s.iterations), std::to_string(s.newton_steps), std::to_string(s.sweeps),
               csv_number(s.eps_final), csv_number(s.last_update), csv_number(s.residual_norm),
               csv_number(s.sup_norm()), csv_number(s.min_second_difference()), s.gap_floor_active ? "1" : "0"});
    return t;
}

CsvTable runtime_table(double seconds) {
    CsvTable t;
    t.header = {"runtime_seconds"};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    t.add_row({buf});
    return t;
}

int cmd_solve(const Config& cfg, Output& out, std::ostream& log) {
    const Domain dom = domain_from_config(cfg);
    const DiscreteSolution s = solve(dom, rhs_from_config(cfg), solve_config_from(cfg));
    CsvTable nodes;
    nodes.header = {"x1", "x2", "u"};
    for (int i = 0; i < s.grid.size(); ++i) {
        const Vec x = s.grid.point(i);
        nodes.add_row({csv_number(x(0)), csv_number(x(1)), csv_number(s.values[i])});
    }
    out.write(nodes, "_nodes", log);
    out.write(solution_summary(dom, s), "_summary", log);
    out.write(runtime_table(s.runtime_seconds), "_timing", log);
    log << "solved: " << s.grid.size() << " nodes, sup|u| = " << csv_number(s.sup_norm()) << "\n";
    return 0;
}

int cmd_fit(const Config& cfg, Output& out, std::ostream& log) {
    const std::string source = cfg.text("fit.source", "solution");
    const int count = static_cast<int>(cfg.integer("fit.count", 40));
    RaySamples samples;
    double expected, dmin, dmax, tol;
    if (source == "solution") {
        const Domain dom = domain_from_config(cfg);
        const RhsSpec rhs = rhs_from_config(cfg);
        const DiscreteSolution s = solve(dom, rhs, solve_config_from(cfg));
        dmin = real_or(cfg, "fit.dist_min", 4.0 * s.grid.h);
        dmax = real_or(cfg, "fit.dist_max", 0.1);
        tol = real_or(cfg, "fit.tolerance", 0.07);
        expected = expected_exponent(rhs, 2);
        samples = axis_samples(s, cfg.real("domain.gamma", 0.0), dmin, dmax, count);
    } else {
        const Barrier b = barrier_from_config(source, cfg);
        dmin = real_or(cfg, "fit.dist_min", 1e-3);
        dmax = real_or(cfg, "fit.dist_max", 5e-2);
        tol = real_or(cfg, "fit.tolerance", 1e-3);
        expected = b.exponent_a();
        samples = axis_samples(b, dmin, dmax, count);
    }
    const FitResult fit = fit_exponent(samples, dmin, dmax);
    const bool pass = std::abs(fit.slope - expected) <= tol;
    CsvTable t;
    t.header = {"source", "dist_min", "dist_max", "n_points", "slope", "intercept", "r_squared", "expected", "tolerance", "pass"};
    t.add_row({source, csv_number(dmin), csv_number(dmax), std::to_string(fit.n_points), csv_number(fit.slope),
               csv_number(fit.intercept), csv_number(fit.r_squared), csv_number(expected), csv_number(tol),
               std::isnan(expected) ? "n/a" : csv_bool(pass)});
    CsvTable pts;
    pts.header = {"dist", "abs_u"};
    for (const auto& [d, v] : samples) pts.add_row({csv_number(d), csv_number(v)});
    out.write(t, "", log);
    out.write(pts, "_samples", log);
    log << "slope " << csv_number(fit.slope) << " (expected " << csv_number(expected) << ")\n";
    return std::isnan(expected) || pass ? 0 : 1;
}

int cmd_compare(const Config& cfg, Output& out, std::ostream& log) {
    const Domain dom = domain_from_config(cfg);
    const std::string lower_name = cfg.text("compare.lower", "sub_valpha");
    const std::string upper_name = cfg.text("compare.upper", "solution");
    const double tol = cfg.real("compare.tolerance", 0.0);
    std::optional<DiscreteSolution> sol;
    auto field = [&](const std::string& name) -> Field {
        if (name == "solution") {
            if (!sol) sol = solve(dom, rhs_from_config(cfg), solve_config_from(cfg));
            return [&s = *sol](const Vec& x) { return s.interpolate(x); };
        }
        const Barrier b = barrier_from_config(name, cfg);
        return [b](const Vec& x) { return b.value(x); };
    };
    const Field lower = field(lower_name);
    const Field upper = field(upper_name);
    const ComparisonResult res =
        sol ? check_comparison_nodes(lower, upper, sol->grid, tol)
            : check_comparison(lower, upper, dom, static_cast<int>(cfg.integer("compare.samples", 10000)),
                               static_cast<std::uint64_t>(cfg.integer("seed", 1)), tol);
    std::string where;
    for (int i = 0; i < res.worst_point.size(); ++i) where += (i ? " " : "") + csv_number(res.worst_point(i));
    CsvTable t;
    t.header = {"lower", "upper", "samples", "worst_gap", "worst_point", "tolerance", "pass"};
    t.add_row({lower_name, upper_name, std::to_string(res.samples), csv_number(res.worst_gap), where, csv_number(tol),
               csv_bool(res.pass)});
    out.write(t, "", log);
    log << "worst gap " << csv_number(res.worst_gap) << "\n";
    return res.pass ? 0 : 1;
}

int cmd_bootstrap(const Config& cfg, Output& out, std::ostream& log) {
    const int n = static_cast<int>(cfg.integer("bootstrap.n", 3));
    const double q = cfg.real("bootstrap.q", 1.0);
    const int steps = static_cast<int>(cfg.integer("bootstrap.steps", 10));
    const BootstrapTrace tr = bootstrap(n, q, steps);
    CsvTable t;
    t.header = {"n", "q", "k", "beta", "error", "closed_form", "abs_diff", "pass"};
    bool pass = true;
    for (int k = 1; k <= steps; ++k) {
        const double closed = bootstrap_error_closed_form(n, q, k);
        const double diff = std::abs(tr.error[k] - closed);
        pass = pass && diff <= 1e-12;
        t.add_row({std::to_string(n), csv_number(q), std::to_string(k), csv_number(tr.beta[k]), csv_number(tr.error[k]),
                   csv_number(closed), csv_number(diff), csv_bool(diff <= 1e-12)});
    }
    out.write(t, "", log);
    if (!is_auto(cfg, "bootstrap.target")) {
        const double target = cfg.real("bootstrap.target", 0.0);
        const int k1 = bootstrap_minimal_steps(n, q, target);
        const int k2 = bootstrap_minimal_steps_by_iteration(n, q, target);
        CsvTable s;
        s.header = {"n", "q", "target", "minimal_k_closed_form", "minimal_k_iteration", "pass"};
        s.add_row({std::to_string(n), csv_number(q), csv_number(target), std::to_string(k1), std::to_string(k2),
                   csv_bool(k1 == k2)});
        out.write(s, "_steps", log);
        pass = pass && k1 == k2;
    }
    return pass ? 0 : 1;
}

int cmd_mixc(const Config& cfg, Output& out, std::ostream& log) {
    const Domain dom = domain_from_config(cfg);
    const double gamma = cfg.real("domain.gamma", 0.0);
    const double k = cfg.real("rhs.k", 1.0);
    const DiscreteSolution s = solve(dom, RhsSpec::affine_sphere(k), solve_config_from(cfg));
    const double dmin = real_or(cfg, "fit.dist_min", 4.0 * s.grid.h);
    const double dmax = real_or(cfg, "fit.dist_max", 0.1);
    const double slack = real_or(cfg, "fit.tolerance", 0.15);
    const MixcReport rep = mixc_probe(s, k, gamma, dmin, dmax, cfg.real("solver.gap_floor", 1e-8));
    const bool slope_ok = rep.fit.slope >= rep.exponent - slack;
    const bool gap_ok = rep.gap_at_origin >= rep.gap_lower_bound;
    const bool identity_ok = rep.identity_residual <= 1e-12;
    CsvTable t;
    t.header = {"n",        "k",        "gamma",     "h",         "dist_min",      "dist_max",        "n_points",
                "exponent", "slope",    "r_squared", "constant",  "gap_at_origin", "gap_lower_bound", "identity_residual",
                "pass"};
    t.add_row({"2", csv_number(k), csv_number(gamma), csv_number(s.grid.h), csv_number(dmin), csv_number(dmax),
               std::to_string(rep.fit.n_points), csv_number(rep.exponent), csv_number(rep.fit.slope),
               csv_number(rep.fit.r_squared), csv_number(rep.constant), csv_number(rep.gap_at_origin),
               csv_number(rep.gap_lower_bound), csv_number(rep.identity_residual),
               csv_bool(slope_ok && gap_ok && identity_ok)});
    out.write(t, "", log);
    out.write(runtime_table(s.runtime_seconds), "_timing", log);
    log << "f slope " << csv_number(rep.fit.slope) << " against rate " << csv_number(rep.exponent) << "\n";
    return slope_ok && gap_ok && identity_ok ? 0 : 1;
}

int cmd_reproduce(const Config& cfg, Output& out, std::ostream& log) {
    const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    SolutionCache cache;
    std::vector<CriterionResult> rows;
    for (long id : cfg.integers("acceptance.criteria", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11})) {
        rows.push_back(run_criterion(static_cast<int>(id), seed, cache));
        const auto& r = rows.back();
        log << "criterion " << r.id << " " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.measured << "\n";
        log.flush();
    }
    out.write(criteria_table(rows), "", log);
    out.write(criteria_timing_table(rows), "_timing", log);
    bool pass = true;
    for (const auto& r : rows) pass = pass && r.pass;
    return pass ? 0 : 1;
}

std::string cache_key(const Domain& d, const RhsSpec& rhs, const SolveConfig& c) {
    std::ostringstream k;
    k << d.name() << ' ' << d.dim() << ' ' << d.diameter() << ' ' << d.volume() << '|' << rhs.name() << ' '
      << csv_number(rhs.parameter) << ' ' << csv_number(rhs.scale) << '|' << csv_number(c.h) << ' ' << c.stencil_width << ' '
      << csv_number(c.eps0) << ' ' << csv_number(c.eps_ratio) << ' ' << csv_number(c.eps_floor) << ' '
      << csv_number(c.damping) << ' ' << csv_number(c.tol) << ' ' << c.max_outer << ' ' << c.max_sweeps << ' '
      << static_cast<int>(c.inner) << ' ' << csv_number(c.omega) << ' ' << c.max_newton << ' ' << c.nested << ' '
      << csv_number(c.coarsest_h) << ' ' << csv_number(c.gap_floor);
    return k.str();
}

}  // namespace

const DiscreteSolution& SolutionCache::get(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg) {
    const std::string key = cache_key(domain, rhs, cfg);
    auto it = solutions_.find(key);
    if (it == solutions_.end()) it = solutions_.emplace(key, solve(domain, rhs, cfg)).first;
    return it->second;
}

Domain domain_from_config(const Config& cfg) {
    const std::string kind = cfg.choice("domain.kind", "parabola_cap", {"parabola_cap", "sphere_cap", "ball", "polytope"});
    const int n = static_cast<int>(cfg.integer("domain.n", 2));
    if (n < 2) throw ConfigError("domain.n", std::to_string(n) + " must be >= 2");
    if (kind == "parabola_cap") {
        return Domain::parabola_cap(n, require_above("domain.t", cfg.real("domain.t", 1.0), 0.0),
                                    require_range("domain.gamma", cfg.real("domain.gamma", 0.0), 0.0, 1.0, true, false));
    }
    if (kind == "sphere_cap") return Domain::sphere_cap(n);
    if (kind == "ball") return Domain::ball(n, require_above("domain.radius", cfg.real("domain.radius", 1.0), 0.0));
    try {
        return Domain::polytope(n, parse_faces(cfg.text("domain.faces", ""), n));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("domain.faces", e.what());
    }
}

RhsSpec rhs_from_config(const Config& cfg) {
    const std::string kind = cfg.choice("rhs.kind", "power", {"power", "degenerate", "affine"});
    const double scale = require_above("rhs.scale", cfg.real("rhs.scale", 1.0), 0.0);
    if (kind == "power") return RhsSpec::power_singular(require_above("rhs.p", cfg.real("rhs.p", 1.0), 0.0), scale);
    if (kind == "degenerate") return RhsSpec::degenerate(require_above("rhs.q", cfg.real("rhs.q", 0.0), 0.0, true), scale);
    return RhsSpec::affine_sphere(require_above("rhs.k", cfg.real("rhs.k", 1.0), 0.0), scale);
}

SolveConfig solve_config_from(const Config& cfg) {
    SolveConfig c;
    c.h = require_range("solver.h", cfg.real("solver.h", c.h), 0.0, 0.5, false, true);
    c.stencil_width = static_cast<int>(cfg.integer("solver.stencil", c.stencil_width));
    if (c.stencil_width != 2 && c.stencil_width != 4 && c.stencil_width != 8 && c.stencil_width != 16) {
        throw ConfigError("solver.stencil", std::to_string(c.stencil_width) + " is not one of 2|4|8|16");
    }
    c.eps0 = real_or(cfg, "solver.eps0", -1.0);
    if (!is_auto(cfg, "solver.eps0")) require_above("solver.eps0", c.eps0, 0.0);
    c.eps_ratio = require_range("solver.eps_ratio", cfg.real("solver.eps_ratio", c.eps_ratio), 0.0, 1.0);
    c.eps_floor = require_above("solver.eps_floor", cfg.real("solver.eps_floor", c.eps_floor), 0.0, true);
    const bool affine = cfg.text("rhs.kind", "power") == "affine";
    c.damping = require_range("solver.damping", real_or(cfg, "solver.damping", affine ? 0.25 : 0.5), 0.0, 1.0, false, true);
    c.tol = require_above("solver.tol", cfg.real("solver.tol", c.tol), 0.0);
    c.max_outer = static_cast<int>(cfg.integer("solver.max_iter", c.max_outer));
    if (c.max_outer < 1) throw ConfigError("solver.max_iter", std::to_string(c.max_outer) + " must be >= 1");
    c.inner = cfg.choice("solver.inner", "newton", {"newton", "gauss-seidel"}) == "newton" ? InnerSolver::Newton
                                                                                           : InnerSolver::GaussSeidel;
    c.omega = require_range("solver.omega", cfg.real("solver.omega", c.omega), 0.0, 2.0);
    c.nested = cfg.flag("solver.nested", c.nested);
    c.coarsest_h = require_above("solver.coarsest_h", cfg.real("solver.coarsest_h", c.coarsest_h), 0.0);
    c.gap_floor = require_above("solver.gap_floor", cfg.real("solver.gap_floor", c.gap_floor), 0.0);
    return c;
}

void validate_config(const std::string& subcommand, const Config& cfg) {
    if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
        throw ConfigError("subcommand", "'" + subcommand + "' is unknown");
    }
    std::vector<std::string> known;
    for (const auto& [k, v] : config_defaults()) known.push_back(k);
    cfg.check_known(known);
    const long seed = cfg.integer("seed", 1);
    if (seed < 0) throw ConfigError("seed", std::to_string(seed) + " must be >= 0");
    cfg.flag("solver.nested", true);

    const Domain dom = domain_from_config(cfg);
    const RhsSpec rhs = rhs_from_config(cfg);
    solve_config_from(cfg);

    const int n = static_cast<int>(cfg.integer("verify.n", 2));
    if (n < 2) throw ConfigError("verify.n", std::to_string(n) + " must be >= 2");
    if (cfg.has("verify.alpha")) require_range("verify.alpha", cfg.real("verify.alpha", 0.5), 0.0, 1.0);
    require_above("verify.p", cfg.real("verify.p", 1.0), 0.0);
    require_above("verify.k", cfg.real("verify.k", 1.0), 0.0);
    require_range("verify.gamma", cfg.real("verify.gamma", 0.5), 0.0, 1.0);
    require_above("verify.diam", cfg.real("verify.diam", 2.0), 0.0);
    if (cfg.integer("verify.samples", 10000) < 1) throw ConfigError("verify.samples", "must be >= 1");
    require_above("verify.margin", cfg.real("verify.margin", 1e-3), 0.0);
    cfg.choice("verify.family", "power", {"power", "affine", "alpha"});

    std::vector<std::string> sources = kBarrierNames;
    sources.push_back("solution");
    const std::string fit_source = cfg.choice("fit.source", "solution", sources);
    const double dmin = real_or(cfg, "fit.dist_min", 1e-3);
    const double dmax = real_or(cfg, "fit.dist_max", 1.0);
    require_above("fit.dist_min", dmin, 0.0);
    if (!(dmax > dmin)) throw ConfigError("fit.dist_max", csv_number(dmax) + " must exceed fit.dist_min");
    if (cfg.integer("fit.count", 40) < 5) throw ConfigError("fit.count", "must be >= 5");
    require_above("fit.tolerance", real_or(cfg, "fit.tolerance", 1.0), 0.0);

    const std::string lower = cfg.choice("compare.lower", "sub_valpha", sources);
    const std::string upper = cfg.choice("compare.upper", "solution", sources);
    if (cfg.integer("compare.samples", 10000) < 1) throw ConfigError("compare.samples", "must be >= 1");
    require_above("compare.tolerance", cfg.real("compare.tolerance", 0.0), 0.0, true);

    const long bn = cfg.integer("bootstrap.n", 3);
    if (bn < 3) throw ConfigError("bootstrap.n", std::to_string(bn) + " must be >= 3");
    const double bq = require_range("bootstrap.q", cfg.real("bootstrap.q", 1.0), 0.0, bn - 2.0, false, true);
    if (cfg.integer("bootstrap.steps", 10) < 0) throw ConfigError("bootstrap.steps", "must be >= 0");
    if (!is_auto(cfg, "bootstrap.target")) {
        require_range("bootstrap.target", cfg.real("bootstrap.target", 0.0), -1e300, 2.0 / (bn - bq));
    }
    for (long id : cfg.integers("acceptance.criteria", {1})) {
        if (id < 1 || id > kCriterionCount) {
            throw ConfigError("acceptance.criteria", std::to_string(id) + " out of range [1," + std::to_string(kCriterionCount) + "]");
        }
    }

    const bool planar = dom.dim() == 2;
    const bool uses_solver = subcommand == "solve" || subcommand == "mixc-probe" ||
                             (subcommand == "fit-exponent" && fit_source == "solution") ||
                             (subcommand == "compare" && (lower == "solution" || upper == "solution"));
    if (uses_solver && !planar) throw ConfigError("domain.n", "must be 2 for the grid solver");
    if (uses_solver && rhs.kind == RhsSpec::Kind::AffineSphere && !dom.contains_origin_interior().interior) {
        throw ConfigError("domain", "must contain the origin in its interior for the affine-sphere equation");
    }
    if (subcommand == "mixc-probe") {
        if (cfg.text("domain.kind", "parabola_cap") != "parabola_cap" || !(cfg.real("domain.gamma", 0.0) > 0.0)) {
            throw ConfigError("domain.gamma", "mixc-probe needs a parabola_cap with gamma in (0,1)");
        }
        if (rhs.kind != RhsSpec::Kind::AffineSphere) throw ConfigError("rhs.kind", "mixc-probe needs rhs.kind=affine");
    }
}

std::string output_directory(const Config& cfg) {
    if (const char* env = std::getenv("SINGMA_OUTPUT_DIR"); env && *env) return env;
    return cfg.text("output.dir", ".");
}

RunOutcome run(const std::string& subcommand, const Config& cfg, std::ostream& log) {
    RunOutcome res;
    try {
        validate_config(subcommand, cfg);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        res.exit_code = 2;
        return res;
    }
    Output out;
    out.dir = output_directory(cfg);
    out.prefix = cfg.text("output.prefix", "");
    if (out.prefix.empty()) out.prefix = subcommand;
    try {
        std::filesystem::create_directories(out.dir);
        if (subcommand == "verify-barriers") res.exit_code = cmd_verify(cfg, out, log);
        else if (subcommand == "solve") res.exit_code = cmd_solve(cfg, out, log);
        else if (subcommand == "fit-exponent") res.exit_code = cmd_fit(cfg, out, log);
        else if (subcommand == "compare") res.exit_code = cmd_compare(cfg, out, log);
        else if (subcommand == "bootstrap") res.exit_code = cmd_bootstrap(cfg, out, log);
        else if (subcommand == "mixc-probe") res.exit_code = cmd_mixc(cfg, out, log);
        else res.exit_code = cmd_reproduce(cfg, out, log);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        res.exit_code = 2;
    } catch (const std::exception& e) {
        log << "error (" << subcommand << "): " << e.what() << "\n";
        res.exit_code = 1;
    }
    res.files = out.files;
    return res;
}

}  // namespace singma

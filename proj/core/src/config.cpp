#include "nsf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nsf/momentum.hpp"

namespace nsf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    // section -> key -> value, plus line numbers for error reporting
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::map<std::string, int> lines;  // "section.key" -> line
    mutable std::set<std::string> used;

    bool has(const std::string& sec, const std::string& key) const {
        auto it = sections.find(sec);
        return it != sections.end() && it->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key) const {
        used.insert(sec + "." + key);
        return sections.at(sec).at(key);
    }
};

[[noreturn]] void fail(const RawConfig& raw, const std::string& sec, const std::string& key,
                       const std::string& msg) {
    auto it = raw.lines.find(sec + "." + key);
    const std::string where =
        it != raw.lines.end() ? " (line " + std::to_string(it->second) + ")" : "";
    throw ConfigError("config: [" + sec + "] " + key + ": " + msg + where);
}

double get_double(const RawConfig& raw, const std::string& sec, const std::string& key,
                  double fallback) {
    if (!raw.has(sec, key)) return fallback;
    const std::string v = raw.get(sec, key);
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(raw, sec, key, "expected a number, got '" + v + "'");
    }
}

int get_int(const RawConfig& raw, const std::string& sec, const std::string& key, int fallback) {
    if (!raw.has(sec, key)) return fallback;
    const std::string v = raw.get(sec, key);
    try {
        size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        fail(raw, sec, key, "expected an integer, got '" + v + "'");
    }
}

std::string get_string(const RawConfig& raw, const std::string& sec, const std::string& key,
                       const std::string& fallback) {
    return raw.has(sec, key) ? raw.get(sec, key) : fallback;
}

LawConfig parse_law(const RawConfig& raw, const std::string& sec, const LawConfig& fallback) {
    LawConfig law = fallback;
    const std::string kind = get_string(raw, sec, "law", "");
    if (!kind.empty()) {
        if (kind == "constant")
            law.kind = LawKind::Constant;
        else if (kind == "affine")
            law.kind = LawKind::Affine;
        else if (kind == "power")
            law.kind = LawKind::PowerLaw;
        else
            fail(raw, sec, "law", "unknown law '" + kind + "' (constant|affine|power)");
    }
    law.params.c0 = get_double(raw, sec, "c0", law.params.c0);
    law.params.c1 = get_double(raw, sec, "c1", law.params.c1);
    law.params.theta_ref = get_double(raw, sec, "theta_ref", law.params.theta_ref);
    law.params.exponent = get_double(raw, sec, "exponent", law.params.exponent);
    law.lower = get_double(raw, sec, "lower", law.lower);
    law.upper = get_double(raw, sec, "upper", law.upper);
    if (law.lower > law.upper) fail(raw, sec, "lower", "clamp interval is empty (lower > upper)");
    return law;
}

const char* law_name(LawKind k) {
    switch (k) {
        case LawKind::Constant: return "constant";
        case LawKind::Affine: return "affine";
        case LawKind::PowerLaw: return "power";
    }
    return "constant";
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void emit_law(std::ostringstream& os, const std::string& sec, const LawConfig& law) {
    os << "[" << sec << "]\n";
    os << "law = " << law_name(law.kind) << "\n";
    os << "c0 = " << fmt(law.params.c0) << "\n";
    if (law.kind == LawKind::Affine) {
        os << "c1 = " << fmt(law.params.c1) << "\n";
        os << "theta_ref = " << fmt(law.params.theta_ref) << "\n";
    }
    if (law.kind == LawKind::PowerLaw) {
        os << "theta_ref = " << fmt(law.params.theta_ref) << "\n";
        os << "exponent = " << fmt(law.params.exponent) << "\n";
    }
    os << "lower = " << fmt(law.lower) << "\n";
    os << "upper = " << fmt(law.upper) << "\n\n";
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            raw.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key at line " + std::to_string(lineno));
        raw.sections[section][key] = value;
        raw.lines[section + "." + key] = lineno;
    }

    RunConfig cfg = default_channel_config();

    const std::string gkind = get_string(raw, "geometry", "kind", "channel");
    if (gkind == "channel")
        cfg.geometry.kind = GeometryConfig::Kind::Channel;
    else if (gkind == "file")
        cfg.geometry.kind = GeometryConfig::Kind::File;
    else
        fail(raw, "geometry", "kind", "unknown kind '" + gkind + "' (channel|file)");
    cfg.geometry.length = get_double(raw, "geometry", "length", cfg.geometry.length);
    cfg.geometry.height = get_double(raw, "geometry", "height", cfg.geometry.height);
    cfg.geometry.nx = get_int(raw, "geometry", "nx", cfg.geometry.nx);
    cfg.geometry.ny = get_int(raw, "geometry", "ny", cfg.geometry.ny);
    cfg.geometry.path = get_string(raw, "geometry", "path", cfg.geometry.path);
    if (cfg.geometry.kind == GeometryConfig::Kind::File && cfg.geometry.path.empty())
        fail(raw, "geometry", "path", "required when kind = file");
    if (cfg.geometry.kind == GeometryConfig::Kind::Channel &&
        (cfg.geometry.nx < 1 || cfg.geometry.ny < 1 || cfg.geometry.length <= 0 ||
         cfg.geometry.height <= 0))
        fail(raw, "geometry", "nx", "channel dimensions must be positive");

    cfg.mu = parse_law(raw, "mu", cfg.mu);
    cfg.lambda = parse_law(raw, "lambda", cfg.lambda);
    cfg.gamma = parse_law(raw, "gamma", cfg.gamma);
    cfg.conductivity = parse_law(raw, "conductivity", cfg.conductivity);
    cfg.h_wall = parse_law(raw, "h_wall", cfg.h_wall);
    cfg.h_outlet = parse_law(raw, "h_outlet", cfg.h_outlet);
    if (cfg.mu.lower <= 0.0) fail(raw, "mu", "lower", "viscosity clamp must be positive");
    if (cfg.gamma.lower <= 0.0) fail(raw, "gamma", "lower", "friction clamp must be positive");
    if (cfg.conductivity.lower <= 0.0)
        fail(raw, "conductivity", "lower", "conductivity clamp must be positive");
    if (cfg.h_wall.lower <= 0.0)
        fail(raw, "h_wall", "lower", "wall heat-transfer clamp must be positive");
    if (cfg.h_outlet.lower < 0.0)
        fail(raw, "h_outlet", "lower", "outlet heat-transfer clamp must be nonnegative");
    if (2.0 * cfg.lambda.upper + cfg.mu.upper < 0.0)
        fail(raw, "lambda", "upper", "clamps rule out 2*lambda + mu >= 0");

    const std::string profile = get_string(raw, "boundary", "profile", "parabolic");
    if (profile == "parabolic")
        cfg.boundary.profile = InletProfile::Parabolic;
    else if (profile == "uniform")
        cfg.boundary.profile = InletProfile::Uniform;
    else
        fail(raw, "boundary", "profile", "unknown profile '" + profile + "' (parabolic|uniform)");
    cfg.boundary.inlet_speed = get_double(raw, "boundary", "inlet_speed", cfg.boundary.inlet_speed);
    cfg.boundary.rho_inf = get_double(raw, "boundary", "rho_inf", cfg.boundary.rho_inf);
    cfg.boundary.rho0 = get_double(raw, "boundary", "rho0", cfg.boundary.rho0);
    cfg.boundary.theta_in = get_double(raw, "boundary", "theta_in", cfg.boundary.theta_in);
    cfg.boundary.theta_wall = get_double(raw, "boundary", "theta_wall", cfg.boundary.theta_wall);
    cfg.boundary.theta_out = get_double(raw, "boundary", "theta_out", cfg.boundary.theta_out);
    if (cfg.boundary.rho_inf <= 0.0) fail(raw, "boundary", "rho_inf", "must be positive");
    if (cfg.boundary.rho0 <= 0.0) fail(raw, "boundary", "rho0", "must be positive");
    if (cfg.boundary.theta_in <= 0.0 || cfg.boundary.theta_wall <= 0.0 ||
        cfg.boundary.theta_out <= 0.0)
        fail(raw, "boundary", "theta_in", "temperatures must be positive (K)");
    const std::string lifting = get_string(raw, "boundary", "lifting", "harmonic");
    if (lifting == "harmonic")
        cfg.boundary.lifting = LiftingMode::Harmonic;
    else if (lifting == "zero_wall")
        cfg.boundary.lifting = LiftingMode::ZeroOnWall;
    else
        fail(raw, "boundary", "lifting", "unknown lifting '" + lifting + "' (harmonic|zero_wall)");

    cfg.numerics.q = get_double(raw, "numerics", "q", cfg.numerics.q);
    cfg.numerics.p = get_double(raw, "numerics", "p", cfg.numerics.p);
    if (raw.has("numerics", "p") && !raw.has("numerics", "r"))
        cfg.numerics.r = 2.0 * cfg.numerics.p / (cfg.numerics.p - 4.0);
    cfg.numerics.r = get_double(raw, "numerics", "r", cfg.numerics.r);
    if (cfg.numerics.q <= 2.0) fail(raw, "numerics", "q", "exponent q must exceed 2");
    if (cfg.numerics.p <= 4.0)
        fail(raw, "numerics", "p", "exponent p must exceed 4 so r = 2p/(p-4) is positive");
    {
        const double r_expected = 2.0 * cfg.numerics.p / (cfg.numerics.p - 4.0);
        if (std::abs(cfg.numerics.r - r_expected) > 1e-9 * r_expected)
            fail(raw, "numerics", "r",
                 "r must equal 2p/(p-4) = " + fmt(r_expected) + " for p = " + fmt(cfg.numerics.p));
    }
    cfg.numerics.M = get_double(raw, "numerics", "M", cfg.numerics.M);
    if (cfg.numerics.M <= 0.0) fail(raw, "numerics", "M", "truncation level must be positive");
    if (raw.has("numerics", "M_list")) {
        cfg.numerics.m_list.clear();
        std::istringstream ls(raw.get("numerics", "M_list"));
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                cfg.numerics.m_list.push_back(std::stod(tok));
            } catch (const std::exception&) {
                fail(raw, "numerics", "M_list", "expected numbers, got '" + tok + "'");
            }
        }
        for (size_t i = 0; i + 1 < cfg.numerics.m_list.size(); ++i)
            if (cfg.numerics.m_list[i] >= cfg.numerics.m_list[i + 1])
                fail(raw, "numerics", "M_list", "levels must be strictly ascending");
        if (!cfg.numerics.m_list.empty() && cfg.numerics.m_list.front() <= 0.0)
            fail(raw, "numerics", "M_list", "levels must be positive");
    }
    cfg.numerics.alpha = get_double(raw, "numerics", "alpha", cfg.numerics.alpha);
    if (cfg.numerics.alpha <= 0.0 || cfg.numerics.alpha > 1.0)
        fail(raw, "numerics", "alpha", "damping must lie in (0, 1]");
    cfg.numerics.tol = get_double(raw, "numerics", "tol", cfg.numerics.tol);
    if (cfg.numerics.tol <= 0.0) fail(raw, "numerics", "tol", "tolerance must be positive");
    cfg.numerics.max_iter = get_int(raw, "numerics", "max_iter", cfg.numerics.max_iter);
    if (cfg.numerics.max_iter < 1) fail(raw, "numerics", "max_iter", "must be at least 1");
    if (raw.has("numerics", "solver")) {
        try {
            cfg.numerics.solver = parse_solve_method(raw.get("numerics", "solver"));
        } catch (const std::exception& e) {
            fail(raw, "numerics", "solver", e.what());
        }
    }
    const std::string adv = get_string(raw, "numerics", "advection", "centered");
    if (adv == "centered")
        cfg.numerics.advection = AdvectionScheme::Centered;
    else if (adv == "upwind")
        cfg.numerics.advection = AdvectionScheme::Upwind;
    else
        fail(raw, "numerics", "advection", "unknown scheme '" + adv + "' (centered|upwind)");
    if (raw.has("numerics", "eps_stag")) {
        cfg.numerics.eps_stag = get_double(raw, "numerics", "eps_stag", cfg.numerics.eps_stag);
        if (cfg.numerics.eps_stag < 0.0)
            fail(raw, "numerics", "eps_stag", "threshold must be nonnegative");
    }
    cfg.numerics.eps_align = get_double(raw, "numerics", "eps_align", cfg.numerics.eps_align);
    if (cfg.numerics.eps_align < 0.0)
        fail(raw, "numerics", "eps_align", "threshold must be nonnegative");

    cfg.output.fields_path = get_string(raw, "output", "fields", cfg.output.fields_path);
    cfg.output.report_path = get_string(raw, "output", "report", cfg.output.report_path);
    cfg.output.verbosity = get_int(raw, "output", "verbosity", cfg.output.verbosity);

    for (const auto& [sec, keys] : raw.sections)
        for (const auto& [key, value] : keys)
            if (!raw.used.count(sec + "." + key)) fail(raw, sec, key, "unknown key");
    return cfg;
}

RunConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[geometry]\n";
    if (c.geometry.kind == GeometryConfig::Kind::Channel) {
        os << "kind = channel\n";
        os << "length = " << fmt(c.geometry.length) << "\n";
        os << "height = " << fmt(c.geometry.height) << "\n";
        os << "nx = " << c.geometry.nx << "\n";
        os << "ny = " << c.geometry.ny << "\n\n";
    } else {
        os << "kind = file\n";
        os << "path = " << c.geometry.path << "\n\n";
    }
    emit_law(os, "mu", c.mu);
    emit_law(os, "lambda", c.lambda);
    emit_law(os, "gamma", c.gamma);
    emit_law(os, "conductivity", c.conductivity);
    emit_law(os, "h_wall", c.h_wall);
    emit_law(os, "h_outlet", c.h_outlet);
    os << "[boundary]\n";
    os << "profile = " << (c.boundary.profile == InletProfile::Parabolic ? "parabolic" : "uniform")
       << "\n";
    os << "inlet_speed = " << fmt(c.boundary.inlet_speed) << "\n";
    os << "rho_inf = " << fmt(c.boundary.rho_inf) << "\n";
    os << "rho0 = " << fmt(c.boundary.rho0) << "\n";
    os << "theta_in = " << fmt(c.boundary.theta_in) << "\n";
    os << "theta_wall = " << fmt(c.boundary.theta_wall) << "\n";
    os << "theta_out = " << fmt(c.boundary.theta_out) << "\n";
    os << "lifting = " << (c.boundary.lifting == LiftingMode::Harmonic ? "harmonic" : "zero_wall")
       << "\n\n";
    os << "[numerics]\n";
    os << "q = " << fmt(c.numerics.q) << "\n";
    os << "p = " << fmt(c.numerics.p) << "\n";
    os << "r = " << fmt(c.numerics.r) << "\n";
    os << "M = " << fmt(c.numerics.M) << "\n";
    if (!c.numerics.m_list.empty()) {
        os << "M_list = ";
        for (size_t i = 0; i < c.numerics.m_list.size(); ++i)
            os << (i ? ", " : "") << fmt(c.numerics.m_list[i]);
        os << "\n";
    }
    os << "alpha = " << fmt(c.numerics.alpha) << "\n";
    os << "tol = " << fmt(c.numerics.tol) << "\n";
    os << "max_iter = " << c.numerics.max_iter << "\n";
    os << "solver = ";
    switch (c.numerics.solver) {
        case SolveMethod::Direct: os << "direct"; break;
        case SolveMethod::ConjugateGradient: os << "cg"; break;
        case SolveMethod::BiCGStab: os << "bicgstab"; break;
    }
    os << "\n";
    os << "advection = "
       << (c.numerics.advection == AdvectionScheme::Centered ? "centered" : "upwind") << "\n";
    if (c.numerics.eps_stag >= 0.0) os << "eps_stag = " << fmt(c.numerics.eps_stag) << "\n";
    os << "eps_align = " << fmt(c.numerics.eps_align) << "\n\n";
    os << "[output]\n";
    if (!c.output.fields_path.empty()) os << "fields = " << c.output.fields_path << "\n";
    if (!c.output.report_path.empty()) os << "report = " << c.output.report_path << "\n";
    os << "verbosity = " << c.output.verbosity << "\n";
    return os.str();
}

RunConfig default_channel_config() {
    // Highly viscous regime. The density recovery feeds ρ into the pressure
    // p = ρRθ whose absolute scale is ~1e5 Pa; the Picard loop gain is roughly
    // L·ρ·Rθ/(μ·u), so the baseline picks μ large enough that pressure-driven
    // velocity corrections stay small against the inlet speed.
    RunConfig c;
    const AirConstants air;
    const double mu = 1e8;
    c.mu = {LawKind::Constant, {.c0 = mu}, 0.5 * mu, 2.0 * mu};
    c.lambda = {LawKind::Constant, {.c0 = -0.2 * mu}, -0.4 * mu, 0.0};
    const double nu = 1e6;  // wall friction far below μ/H keeps the walls slippery
    c.gamma = {LawKind::Constant, {.c0 = nu}, 0.5 * nu, 2.0 * nu};
    c.conductivity = {LawKind::Constant, {.c0 = 10.0}, 5.0, 20.0};
    c.h_wall = {LawKind::Constant, {.c0 = 5.0}, 2.5, 10.0};
    c.h_outlet = {LawKind::Constant, {.c0 = 5.0}, 0.0, 10.0};
    c.boundary.inlet_speed = 1.0;
    c.numerics.M = 10.0 * air.rho0;
    return c;
}

Mesh build_mesh(const GeometryConfig& geometry) {
    if (geometry.kind == GeometryConfig::Kind::Channel)
        return build_rectangle_channel(geometry.length, geometry.height, geometry.nx, geometry.ny);
    std::ifstream in(geometry.path);
    if (!in) throw ConfigError("config: cannot open mesh file '" + geometry.path + "'");
    return load_mesh(in);
}

CoefficientSet build_coefficients(const RunConfig& config) {
    auto mk = [](const LawConfig& l) {
        return make_law(l.kind, l.params, l.lower, l.upper);
    };
    CoefficientSet cs{mk(config.mu),          mk(config.lambda),   mk(config.gamma),
                      mk(config.conductivity), mk(config.h_wall),  mk(config.h_outlet)};
    check_viscosity_pair(cs.mu, cs.lambda);
    return cs;
}

BoundaryData build_boundary(const RunConfig& config, const Mesh& mesh) {
    BoundaryData bd = make_channel_boundary_data(mesh, config.boundary.profile,
                                                 config.boundary.inlet_speed,
                                                 config.boundary.rho_inf);
    bd.theta_in = config.boundary.theta_in;
    bd.theta_wall = config.boundary.theta_wall;
    bd.theta_out = config.boundary.theta_out;
    bd.rho0 = config.boundary.rho0;

    const double imbalance = check_compatibility(bd.flux, mesh);
    const double scale = boundary_l1(bd.flux, {BoundaryTag::Inlet, BoundaryTag::Outlet});
    if (scale > 0.0 && std::abs(imbalance) > 1e-10 * scale)
        throw ConfigError("config: boundary flux violates the compatibility condition (net flux " +
                          fmt(imbalance) + " vs scale " + fmt(scale) + ")");

    bd.lifting = build_lifting(mesh, bd, config.boundary.lifting);
    return bd;
}

RunParameters build_parameters(const RunConfig& config) {
    RunParameters p;
    p.exponent_q = config.numerics.q;
    p.exponent_p = config.numerics.p;
    p.exponent_r = config.numerics.r;
    p.truncation_M = config.numerics.M;
    p.damping = config.numerics.alpha;
    p.tol = config.numerics.tol;
    p.max_iter = config.numerics.max_iter;
    p.eps_stag = config.numerics.eps_stag;
    p.eps_align = config.numerics.eps_align;
    p.scheme = config.numerics.advection;
    p.solve.method = config.numerics.solver;
    return p;
}

}  // namespace nsf

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsf/coefficients.hpp"
#include "nsf/fixed_point.hpp"
#include "nsf/mesh.hpp"

namespace nsf {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryConfig {
    enum class Kind { Channel, File } kind = Kind::Channel;
    double length = 1.0;
    double height = 0.25;
    int nx = 32;
    int ny = 8;
    std::string path;
};

struct LawConfig {
    LawKind kind = LawKind::Constant;
    LawParams params;
    double lower = 0.0;
    double upper = 0.0;
};

struct BoundaryConfig {
    InletProfile profile = InletProfile::Parabolic;
    double inlet_speed = 0.01;
    double rho_inf = 1.184;
    double rho0 = 1.184;
    double theta_in = 300.0;
    double theta_wall = 300.0;
    double theta_out = 300.0;
    LiftingMode lifting = LiftingMode::Harmonic;
};

struct NumericsConfig {
    double q = 3.0;
    double p = 5.0;
    double r = 10.0;  // must satisfy r = 2p/(p−4)
    double M = 11.84;
    std::vector<double> m_list;  // sweep levels, ascending
    double alpha = 0.5;
    double tol = 1e-8;
    int max_iter = 100;
    SolveMethod solver = SolveMethod::Direct;
    AdvectionScheme advection = AdvectionScheme::Centered;
    double eps_stag = -1.0;  // < 0: auto, 1e-6 × mean speed
    double eps_align = 1e-8;
};

struct OutputConfig {
    std::string fields_path;
    std::string report_path;
    int verbosity = 1;
};

struct RunConfig {
    GeometryConfig geometry;
    LawConfig mu, lambda, gamma, conductivity, h_wall, h_outlet;
    BoundaryConfig boundary;
    NumericsConfig numerics;
    OutputConfig output;
};

/// Line-oriented `key = value` format with `[section]` headers and `#`
/// comments. Throws ConfigError with the offending line number; validates the
/// exponent relations (q > 2, r = 2p/(p−4)) and basic ranges at parse time.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalized form; serialize(parse(x)) is idempotent.
std::string serialize_config(const RunConfig& config);

/// Air-at-300K channel baseline.
RunConfig default_channel_config();

Mesh build_mesh(const GeometryConfig& geometry);
CoefficientSet build_coefficients(const RunConfig& config);
/// Builds Dirichlet data, flux, and the lifting; throws ConfigError when the
/// discrete compatibility integral fails the 1e-10 relative gate.
BoundaryData build_boundary(const RunConfig& config, const Mesh& mesh);
RunParameters build_parameters(const RunConfig& config);

}  // namespace nsf

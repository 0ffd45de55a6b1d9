#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsf {

/// One audited bound: a measured left-hand side against the data-explicit
/// right-hand side of an a-priori estimate.
struct EstimateAudit {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
    bool asserted = true;  // monitored-only entries never fail a run
};

inline bool audit_pass(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-8); }

struct IterationRecord {
    int iteration = 0;
    double dm_q = 0.0;      // ‖m⁺−m‖_q relative
    double dxi_h1 = 0.0;    // ‖ξ⁺−ξ‖ relative (H¹-type norm)
    double dpi_r = 0.0;     // ‖π⁺−π‖_r relative
    double continuity_residual = 0.0;
    double momentum_ratio = 0.0;   // ‖ρu‖_q / ‖g‖_{q,∂Ω}
    double theta_norm = 0.0;       // ‖θ‖_{1,2}
    double pressure_norm = 0.0;    // ‖p_M‖_r
    double radius_R2 = 0.0;
    double radius_R3 = 0.0;
    double max_rho = 0.0;
    double truncation_fraction = 0.0;  // |{ρ > M}| / |Ω|
    long clamp_events = 0;
    std::vector<EstimateAudit> audits;
};

struct IterationReport {
    std::vector<IterationRecord> history;
    bool converged = false;

    bool all_asserted_audits_pass() const;
};

/// CSV with the versioned "nsf-report-1" header row.
void write_report_csv(const IterationReport& report, std::ostream& out);

}  // namespace nsf

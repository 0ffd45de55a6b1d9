#include "nsf/report.hpp"

#include <ostream>

namespace nsf {

bool IterationReport::all_asserted_audits_pass() const {
    for (const auto& rec : history)
        for (const auto& a : rec.audits)
            if (a.asserted && !a.pass) return false;
    return true;
}

void write_report_csv(const IterationReport& report, std::ostream& out) {
    out.precision(17);
    out << "nsf-report-1\n";
    out << "iteration,dm_q,dxi_h1,dpi_r,continuity_residual,momentum_ratio,theta_norm,"
           "pressure_norm,radius_R2,radius_R3,max_rho,truncation_fraction,clamp_events";
    if (!report.history.empty())
        for (const auto& a : report.history.front().audits)
            out << "," << a.name << "_lhs," << a.name << "_rhs," << a.name << "_pass";
    out << "\n";
    for (const auto& r : report.history) {
        out << r.iteration << "," << r.dm_q << "," << r.dxi_h1 << "," << r.dpi_r << ","
            << r.continuity_residual << "," << r.momentum_ratio << "," << r.theta_norm << ","
            << r.pressure_norm << "," << r.radius_R2 << "," << r.radius_R3 << "," << r.max_rho
            << "," << r.truncation_fraction << "," << r.clamp_events;
        for (const auto& a : r.audits)
            out << "," << a.lhs << "," << a.rhs << "," << (a.pass ? 1 : 0);
        out << "\n";
    }
    out << "converged," << (report.converged ? 1 : 0) << "\n";
}

}  // namespace nsf

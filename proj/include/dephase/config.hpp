#ifndef DEPHASE_CONFIG_HPP
#define DEPHASE_CONFIG_HPP

#include "dephase/analysis.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dephase {

// Run configuration parsed from a key-value text file with [section] headers.
// Sections: [bath] (required), [quadrature], [run], and repeatable [protocol].
// Unknown keys are rejected with a line-anchored diagnostic; runs are fully
// deterministic (no seeds).
struct RunConfig {
    BathSpec bath = exciton_gaas_77k();
    QuadratureSettings quadrature;
    std::vector<ProtocolSpec> protocols;
    double horizon = 10.0;
    int grid_per_dt = 40;
    int threads = 1;
    double dt_min = 0.0;        // constraint for `--enforce-dtmin`
    bool enforce_dt_min = false;

    // sweep parameters (t2-rate scan); t1_rate is the qubit inverse lifetime
    // the rates are compared against (an input, never computed)
    double sweep_dt_lo = 0.0, sweep_dt_hi = 0.0;
    int sweep_points = 0;
    double t1_rate = 1e-3; // 1 ns^-1 in ps^-1

    // asymptote / band parameters
    double asymptote_dt = 0.0;
    std::vector<double> dt_list;    // extra spacings for the asymptote report
    int series_n_max = 50;          // delta-gamma series length
    std::vector<int> strobe_cycles; // stroboscopic sample points for band traces
};

RunConfig parse_config_file(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::string& name);

} // namespace dephase

#endif

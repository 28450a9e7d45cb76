#include "dephase/trace_io.hpp"
#include "dephase/errors.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>

namespace dephase {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(const CoherenceTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "t,gamma,coherence\n";
    for (std::size_t i = 0; i < trace.grid.size(); ++i)
        out << format_double(trace.grid[i]) << ',' << format_double(trace.gamma[i]) << ','
            << format_double(trace.coherence[i]) << '\n';
}

namespace {

nlohmann::json bath_json(const BathSpec& bath) {
    nlohmann::json j;
    j["family"] = to_string(bath.model.family);
    j["coupling"] = bath.model.coupling;
    j["omega_c"] = bath.model.omega_c;
    j["temperature"] = bath.temperature;
    j["alpha"] = bath.alpha;
    j["units"] = bath.units == UnitsMode::physical ? "physical" : "natural";
    if (bath.model.family == SpectralFamily::tabulated) {
        j["samples_omega"] = bath.model.sample_omega;
        j["samples_density"] = bath.model.sample_density;
    }
    return j;
}

} // namespace

void write_trace_metadata(const CoherenceTrace& trace, const BathSpec& bath,
                          const QuadratureSettings& settings, const std::filesystem::path& path,
                          bool with_timestamp) {
    nlohmann::json j;
    j["version"] = version_string;
    j["bath"] = bath_json(bath);
    j["sequence"] = {{"label", trace.sequence.label}, {"times", trace.sequence.times}};
    if (trace.sequence.min_separation)
        j["sequence"]["min_separation"] = *trace.sequence.min_separation;
    j["quadrature"] = {{"rel_tol", settings.rel_tol},
                       {"abs_tol", settings.abs_tol},
                       {"omega_max_factor", settings.omega_max_factor},
                       {"max_subdivisions", settings.max_subdivisions}};
    j["samples"] = trace.grid.size();
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

void write_sequence_csv(const PulseSequence& seq, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "index,t\n";
    for (std::size_t i = 0; i < seq.times.size(); ++i)
        out << (i + 1) << ',' << format_double(seq.times[i]) << '\n';
}

} // namespace dephase

#include "dephase/config.hpp"
#include "dephase/errors.hpp"

#include <fstream>
#include <sstream>

namespace dephase {

namespace {

struct BathDraft {
    std::string preset;
    std::string family;
    double coupling = 0.0;
    double omega_c = 0.0;
    double temperature = 0.0;
    double alpha = 1.0;
    std::string units = "natural";
    bool any = false;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ParamError(name + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& name, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) fail(name, line, "invalid number '" + v + "'");
        return x;
    } catch (const std::exception&) {
        fail(name, line, "invalid number '" + v + "'");
    }
}

int to_int(const std::string& name, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) fail(name, line, "invalid integer '" + v + "'");
        return x;
    } catch (const std::exception&) {
        fail(name, line, "invalid integer '" + v + "'");
    }
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

BathSpec build_bath(const BathDraft& d, const std::string& name, int line) {
    if (!d.preset.empty()) return bath_preset(d.preset);
    if (d.family.empty()) fail(name, line, "[bath] needs either 'preset' or 'family'");
    const SpectralFamily family = spectral_family_from_string(d.family);
    if (d.units == "physical") {
        SpectralModel model = SpectralModel::physical(family, d.coupling, d.omega_c);
        return BathSpec::physical(std::move(model), d.temperature, d.alpha);
    }
    if (d.units != "natural") fail(name, line, "units must be 'natural' or 'physical'");
    SpectralModel model = SpectralModel::natural(family, d.coupling, d.omega_c);
    return BathSpec::natural(std::move(model), d.temperature, d.alpha);
}

} // namespace

RunConfig parse_config(std::istream& in, const std::string& name) {
    RunConfig cfg;
    BathDraft bath;
    int bath_line = 0;

    std::string section;
    ProtocolSpec proto;
    bool in_protocol = false;

    auto flush_protocol = [&]() {
        if (in_protocol) cfg.protocols.push_back(proto);
        proto = ProtocolSpec{};
        in_protocol = false;
    };

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(name, lineno, "malformed section header");
            flush_protocol();
            section = trim(line.substr(1, line.size() - 2));
            if (section == "protocol") {
                in_protocol = true;
            } else if (section != "bath" && section != "quadrature" && section != "run") {
                fail(name, lineno, "unknown section [" + section + "]");
            }
            if (section == "bath") bath_line = lineno;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(name, lineno, "expected key = value");

        if (section == "bath") {
            bath.any = true;
            if (key == "preset") bath.preset = value;
            else if (key == "family") bath.family = value;
            else if (key == "F" || key == "coupling") bath.coupling = to_double(name, lineno, value);
            else if (key == "omega_c") bath.omega_c = to_double(name, lineno, value);
            else if (key == "temperature") bath.temperature = to_double(name, lineno, value);
            else if (key == "alpha") bath.alpha = to_double(name, lineno, value);
            else if (key == "units") bath.units = value;
            else fail(name, lineno, "unknown key '" + key + "' in [bath]");
        } else if (section == "quadrature") {
            if (key == "rel_tol") cfg.quadrature.rel_tol = to_double(name, lineno, value);
            else if (key == "abs_tol") cfg.quadrature.abs_tol = to_double(name, lineno, value);
            else if (key == "omega_max_factor")
                cfg.quadrature.omega_max_factor = to_double(name, lineno, value);
            else if (key == "max_subdivisions")
                cfg.quadrature.max_subdivisions = to_int(name, lineno, value);
            else fail(name, lineno, "unknown key '" + key + "' in [quadrature]");
        } else if (section == "run") {
            if (key == "horizon") cfg.horizon = to_double(name, lineno, value);
            else if (key == "grid_per_dt") cfg.grid_per_dt = to_int(name, lineno, value);
            else if (key == "threads") cfg.threads = to_int(name, lineno, value);
            else if (key == "dt_min") cfg.dt_min = to_double(name, lineno, value);
            else if (key == "sweep_dt_lo") cfg.sweep_dt_lo = to_double(name, lineno, value);
            else if (key == "sweep_dt_hi") cfg.sweep_dt_hi = to_double(name, lineno, value);
            else if (key == "sweep_points") cfg.sweep_points = to_int(name, lineno, value);
            else if (key == "t1_rate") cfg.t1_rate = to_double(name, lineno, value);
            else if (key == "dt") cfg.asymptote_dt = to_double(name, lineno, value);
            else if (key == "dt_list") {
                std::istringstream ss(value);
                std::string tok;
                while (ss >> tok) cfg.dt_list.push_back(to_double(name, lineno, tok));
            } else if (key == "series_n_max") cfg.series_n_max = to_int(name, lineno, value);
            else if (key == "strobe_cycles") {
                std::istringstream ss(value);
                std::string tok;
                while (ss >> tok) cfg.strobe_cycles.push_back(to_int(name, lineno, tok));
            } else fail(name, lineno, "unknown key '" + key + "' in [run]");
        } else if (section == "protocol") {
            if (key == "kind") proto.kind = protocol_kind_from_string(value);
            else if (key == "dt") proto.dt = to_double(name, lineno, value);
            else if (key == "dt_cp") proto.dt_cp = to_double(name, lineno, value);
            else if (key == "dt_min") proto.dt_min = to_double(name, lineno, value);
            else if (key == "delta2") proto.delta2 = to_double(name, lineno, value);
            else if (key == "level") proto.level = to_int(name, lineno, value);
            else if (key == "n") proto.pulse_count = to_int(name, lineno, value);
            else if (key == "label") proto.label = value;
            else if (key == "times") {
                std::istringstream ss(value);
                double t = 0.0;
                proto.times.clear();
                while (ss >> t) proto.times.push_back(t);
                if (!ss.eof()) fail(name, lineno, "invalid pulse time list");
            } else fail(name, lineno, "unknown key '" + key + "' in [protocol]");
        } else {
            fail(name, lineno, "key outside of any section");
        }
    }
    flush_protocol();

    if (bath.any) cfg.bath = build_bath(bath, name, bath_line);
    cfg.quadrature.validate();
    cfg.bath.validate();
    if (!(cfg.horizon > 0.0)) fail(name, 0, "horizon must be > 0");
    if (cfg.grid_per_dt < 1) fail(name, 0, "grid_per_dt must be >= 1");
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open config file '" + path.string() + "'");
    return parse_config(in, path.filename().string());
}

} // namespace dephase

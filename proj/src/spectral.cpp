#include "dephase/spectral.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dephase {

std::string to_string(SpectralFamily family) {
    switch (family) {
        case SpectralFamily::ohmic_exp: return "ohmic-exp";
        case SpectralFamily::supraohmic_exp: return "supraohmic-exp";
        case SpectralFamily::supraohmic_gauss: return "supraohmic-gauss";
        case SpectralFamily::tabulated: return "tabulated";
    }
    return "?";
}

SpectralFamily spectral_family_from_string(std::string_view name) {
    if (name == "ohmic-exp") return SpectralFamily::ohmic_exp;
    if (name == "supraohmic-exp") return SpectralFamily::supraohmic_exp;
    if (name == "supraohmic-gauss") return SpectralFamily::supraohmic_gauss;
    if (name == "tabulated") return SpectralFamily::tabulated;
    throw ParamError("unknown spectral family '" + std::string(name) + "'");
}

int SpectralModel::frequency_power() const {
    return family == SpectralFamily::ohmic_exp ? 1 : 3;
}

bool SpectralModel::is_supraohmic() const {
    if (family == SpectralFamily::tabulated) {
        // decide from the leading samples: I ~ w^p with p > 1 counts as supra-ohmic
        if (sample_omega.size() < 2 || sample_density[0] > 0.0) return false;
        return true;
    }
    return family != SpectralFamily::ohmic_exp;
}

void SpectralModel::validate() const {
    if (coupling < 0.0) throw ParamError("spectral coupling F must be >= 0");
    if (family == SpectralFamily::tabulated) {
        if (sample_omega.size() < 2) throw ParamError("tabulated model needs at least two samples");
        for (std::size_t i = 0; i < sample_omega.size(); ++i) {
            if (i > 0 && !(sample_omega[i] > sample_omega[i - 1]))
                throw ParamError("tabulated omegas must be strictly increasing");
            if (sample_density[i] < 0.0) throw ParamError("tabulated density must be >= 0");
        }
        if (sample_omega.front() < 0.0) throw ParamError("tabulated omegas must be >= 0");
    } else if (!(omega_c > 0.0)) {
        throw ParamError("cutoff frequency omega_c must be > 0");
    }
}

SpectralModel SpectralModel::natural(SpectralFamily family, double coupling, double omega_c) {
    SpectralModel m;
    m.family = family;
    m.coupling = coupling;
    m.omega_c = omega_c;
    m.declared_units = UnitsMode::natural;
    m.validate();
    return m;
}

SpectralModel SpectralModel::physical(SpectralFamily family, double coupling_si, double cutoff_mev) {
    SpectralModel m;
    m.family = family;
    m.coupling = units::coupling_si_to_ps(coupling_si, m.frequency_power());
    m.omega_c = units::mev_to_radps(cutoff_mev);
    m.declared_units = UnitsMode::physical;
    m.validate();
    return m;
}

SpectralModel SpectralModel::tabulated(std::vector<std::pair<double, double>> samples,
                                       double omega_c_hint) {
    SpectralModel m;
    m.family = SpectralFamily::tabulated;
    m.coupling = 1.0;
    m.omega_c = omega_c_hint;
    m.sample_omega.reserve(samples.size());
    m.sample_density.reserve(samples.size());
    for (const auto& [w, d] : samples) {
        m.sample_omega.push_back(w);
        m.sample_density.push_back(d);
    }
    m.validate();
    return m;
}

namespace {

// Monotone cubic (Fritsch-Carlson) interpolation; preserves positivity of the
// tabulated samples.
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y, double t) {
    const std::size_t n = x.size();
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    if (i >= n - 1) i = n - 2;

    auto slope = [&](std::size_t k) { return (y[k + 1] - y[k]) / (x[k + 1] - x[k]); };
    auto deriv = [&](std::size_t k) -> double {
        if (k == 0) {
            const double h0 = x[1] - x[0], h1 = x[2] - x[1];
            double d = ((2 * h0 + h1) * slope(0) - h0 * slope(1)) / (h0 + h1);
            if (d * slope(0) <= 0.0) return 0.0;
            if (slope(0) * slope(1) <= 0.0 && std::abs(d) > 3 * std::abs(slope(0)))
                return 3 * slope(0);
            return d;
        }
        if (k == n - 1) {
            const double h0 = x[n - 2] - x[n - 3], h1 = x[n - 1] - x[n - 2];
            double d = ((2 * h1 + h0) * slope(n - 2) - h1 * slope(n - 3)) / (h0 + h1);
            if (d * slope(n - 2) <= 0.0) return 0.0;
            if (slope(n - 2) * slope(n - 3) <= 0.0 && std::abs(d) > 3 * std::abs(slope(n - 2)))
                return 3 * slope(n - 2);
            return d;
        }
        const double s0 = slope(k - 1), s1 = slope(k);
        if (s0 * s1 <= 0.0) return 0.0;
        const double h0 = x[k] - x[k - 1], h1 = x[k + 1] - x[k];
        const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
        return (w1 + w2) / (w1 / s0 + w2 / s1);
    };

    double d0, d1;
    if (n == 2) {
        d0 = d1 = slope(0);
    } else {
        d0 = deriv(i);
        d1 = deriv(i + 1);
    }
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y[i] + h10 * h * d0 + h01 * y[i + 1] + h11 * h * d1;
}

} // namespace

double eval_spectral_density(const SpectralModel& model, double omega) {
    if (omega < 0.0) throw DomainError("spectral density requires omega >= 0");
    if (omega == 0.0) return 0.0;
    switch (model.family) {
        case SpectralFamily::ohmic_exp:
            return model.coupling * omega * std::exp(-omega / model.omega_c);
        case SpectralFamily::supraohmic_exp:
            return model.coupling * omega * omega * omega * std::exp(-omega / model.omega_c);
        case SpectralFamily::supraohmic_gauss: {
            const double r = omega / model.omega_c;
            return model.coupling * omega * omega * omega * std::exp(-r * r);
        }
        case SpectralFamily::tabulated:
            if (omega < model.sample_omega.front() || omega > model.sample_omega.back())
                throw RangeError("tabulated spectral density evaluated outside sample range");
            return model.coupling * pchip_eval(model.sample_omega, model.sample_density, omega);
    }
    throw DomainError("unknown spectral family");
}

double correlation_time(const SpectralModel& model) {
    if (!(model.omega_c > 0.0))
        throw UnsupportedError("model has no declared cutoff frequency");
    constexpr double two_pi = 6.283185307179586476925286766559;
    return two_pi / model.omega_c;
}

void BathSpec::validate() const {
    model.validate();
    if (!(temperature > 0.0)) throw ParamError("temperature must be > 0");
    if (!(alpha > 0.0) || alpha > 1.0) throw ParamError("alpha must lie in (0, 1]");
}

BathSpec BathSpec::natural(SpectralModel model, double temperature, double alpha) {
    BathSpec b{std::move(model), temperature, alpha, UnitsMode::natural};
    b.validate();
    return b;
}

BathSpec BathSpec::physical(SpectralModel model, double temperature_kelvin, double alpha) {
    BathSpec b{std::move(model), units::kelvin_to_radps(temperature_kelvin), alpha,
               UnitsMode::physical};
    b.validate();
    return b;
}

double coth_stable(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        // coth(x) = 1/x + x/3 - x^3/45 + O(x^5)
        return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    }
    return 1.0 / std::tanh(x);
}

double eval_eta(const BathSpec& bath, double omega) {
    if (!(omega > 0.0)) throw DomainError("eta requires omega > 0");
    const double i_w = eval_spectral_density(bath.model, omega);
    const double pref = 4.0 * bath.alpha * bath.alpha; // (2 alpha)^2
    return pref * i_w / (2.0 * omega * omega) * coth_stable(omega / (2.0 * bath.temperature));
}

BathSpec exciton_gaas_77k() {
    // Fitted GaAs quantum-dot exciton bath: I(w) = F w^3 exp(-w^2/w_c^2) with
    // F = 1.14e-26 (SI), hbar*w_c = 2 meV, at T = 77 K and alpha = 1/2.
    SpectralModel model =
        SpectralModel::physical(SpectralFamily::supraohmic_gauss, 1.14e-26, 2.0);
    return BathSpec::physical(std::move(model), 77.0, 0.5);
}

BathSpec bath_preset(std::string_view name) {
    if (name == "exciton-gaas-77K" || name == "exciton-gaas-77k")
        return exciton_gaas_77k();
    throw ParamError("unknown bath preset '" + std::string(name) + "'");
}

double default_omega_max_factor(const SpectralModel& model) {
    return model.has_gaussian_cutoff() ? 40.0 : 200.0;
}

} // namespace dephase

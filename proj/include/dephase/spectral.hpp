#ifndef DEPHASE_SPECTRAL_HPP
#define DEPHASE_SPECTRAL_HPP

#include "dephase/units.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dephase {

enum class SpectralFamily { ohmic_exp, supraohmic_exp, supraohmic_gauss, tabulated };

std::string to_string(SpectralFamily family);
SpectralFamily spectral_family_from_string(std::string_view name);

// Bath spectral density I(w).  Parameters are stored in natural (ps-based)
// units regardless of how the model was constructed; `declared_units` records
// the construction convention for round-tripping at the I/O boundary.
//
//   ohmic-exp:        I(w) = F w   exp(-w/w_c)
//   supraohmic-exp:   I(w) = F w^3 exp(-w/w_c)
//   supraohmic-gauss: I(w) = F w^3 exp(-w^2/w_c^2)
//   tabulated:        monotone cubic interpolation of (w, I) samples
struct SpectralModel {
    SpectralFamily family = SpectralFamily::supraohmic_gauss;
    double coupling = 0.0; // F >= 0
    double omega_c = 0.0;  // > 0 (tabulated: declared cutoff, 0 if none)
    std::vector<double> sample_omega;   // tabulated only, strictly increasing
    std::vector<double> sample_density; // tabulated only, >= 0
    UnitsMode declared_units = UnitsMode::natural;

    static SpectralModel natural(SpectralFamily family, double coupling, double omega_c);
    // coupling_si in SI seconds-based units ([F] = s^(p-1) where I = F w^p ...),
    // cutoff as hbar*omega_c in meV.
    static SpectralModel physical(SpectralFamily family, double coupling_si, double cutoff_mev);
    static SpectralModel tabulated(std::vector<std::pair<double, double>> samples,
                                   double omega_c_hint = 0.0);

    // Power of w multiplying the cutoff function (1 ohmic, 3 supra-ohmic).
    int frequency_power() const;
    bool is_supraohmic() const;
    bool has_gaussian_cutoff() const { return family == SpectralFamily::supraohmic_gauss; }
    void validate() const;
};

// I(w); exactly zero at w = 0.  Negative w -> DomainError; tabulated models
// throw RangeError outside the sample range.
double eval_spectral_density(const SpectralModel& model, double omega);

// tau_c = 2 pi / w_c.  Tabulated models without a declared cutoff -> UnsupportedError.
double correlation_time(const SpectralModel& model);

// Bath specification.  `temperature` is stored as the thermal frequency
// k_B T / hbar in rad per time unit (equal to the given temperature in
// natural mode, converted from kelvin in physical mode).
struct BathSpec {
    SpectralModel model;
    double temperature = 0.0; // > 0
    double alpha = 1.0;       // in (0, 1]
    UnitsMode units = UnitsMode::natural;

    static BathSpec natural(SpectralModel model, double temperature, double alpha);
    static BathSpec physical(SpectralModel model, double temperature_kelvin, double alpha);
    void validate() const;
};

// coth(x) with a series expansion below x = 1e-4 to keep uniform accuracy
// in the high-temperature regime.
double coth_stable(double x);

// Thermal kernel eta(w) = (2 alpha)^2 I(w) coth(w / 2T) / (2 w^2), w > 0.
double eval_eta(const BathSpec& bath, double omega);

// Named presets addressable from config files ("exciton-gaas-77K": the fitted
// GaAs quantum-dot exciton bath at 77 K).
BathSpec bath_preset(std::string_view name);
BathSpec exciton_gaas_77k();

// Default upper-limit multiplier for frequency integrals over this model
// (Gaussian cutoffs decay much faster than exponential ones).
double default_omega_max_factor(const SpectralModel& model);

} // namespace dephase

#endif

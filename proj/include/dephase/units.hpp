#ifndef DEPHASE_UNITS_HPP
#define DEPHASE_UNITS_HPP

namespace dephase {

// Unit conventions.
//
// All internal computation uses natural units (hbar = k_B = 1): time is the
// base unit, frequencies are rad/time, temperatures are frequencies.
// In physical mode, inputs are picoseconds / meV / kelvin and are converted
// at the boundary.
enum class UnitsMode { natural, physical };

namespace units {

// hbar in meV*ps
inline constexpr double hbar_mev_ps = 0.6582119569;
// Boltzmann constant in meV/K
inline constexpr double kb_mev_per_k = 0.08617333262;
// seconds per picosecond
inline constexpr double s_per_ps = 1e-12;

// Energy in meV -> angular frequency in rad/ps.
inline double mev_to_radps(double e_mev) { return e_mev / hbar_mev_ps; }
inline double radps_to_mev(double w) { return w * hbar_mev_ps; }

// Temperature in kelvin -> thermal frequency k_B T / hbar in rad/ps.
inline double kelvin_to_radps(double t_k) { return t_k * kb_mev_per_k / hbar_mev_ps; }
inline double radps_to_kelvin(double w) { return w * hbar_mev_ps / kb_mev_per_k; }

// Coupling constant F in SI (seconds-based) units -> ps-based, for a spectral
// density I(w) = F * w^p * cutoff(w).  [F] = time^(p-1) so that [I] = frequency.
inline double coupling_si_to_ps(double f_si, int power) {
    double f = f_si;
    for (int i = 1; i < power; ++i) f /= s_per_ps;
    return f;
}
inline double coupling_ps_to_si(double f_ps, int power) {
    double f = f_ps;
    for (int i = 1; i < power; ++i) f *= s_per_ps;
    return f;
}

} // namespace units
} // namespace dephase

#endif

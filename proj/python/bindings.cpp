// pybind11 bindings for the main operations.

#include "dephase/analysis.hpp"
#include "dephase/errors.hpp"
#include "dephase/magnus.hpp"
#include "dephase/trace_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dephase;

namespace {

PulseSequence make_sequence(const std::vector<double>& times) {
    PulseSequence seq;
    seq.times = times;
    seq.validate();
    return seq;
}

QuadratureSettings make_settings(double rel_tol, double abs_tol, double omega_max_factor,
                                 int max_subdivisions) {
    QuadratureSettings q;
    q.rel_tol = rel_tol;
    q.abs_tol = abs_tol;
    q.omega_max_factor = omega_max_factor;
    q.max_subdivisions = max_subdivisions;
    q.validate();
    return q;
}

} // namespace

PYBIND11_MODULE(_dephase, m) {
    m.doc() = "single-qubit pure dephasing under bang-bang dynamical decoupling";
    m.attr("__version__") = version_string;

    py::register_exception<Error>(m, "DephaseError");

    py::enum_<SpectralFamily>(m, "SpectralFamily")
        .value("ohmic_exp", SpectralFamily::ohmic_exp)
        .value("supraohmic_exp", SpectralFamily::supraohmic_exp)
        .value("supraohmic_gauss", SpectralFamily::supraohmic_gauss)
        .value("tabulated", SpectralFamily::tabulated);

    py::class_<SpectralModel>(m, "SpectralModel")
        .def_static("natural", &SpectralModel::natural, py::arg("family"), py::arg("coupling"),
                    py::arg("omega_c"))
        .def_static("physical", &SpectralModel::physical, py::arg("family"),
                    py::arg("coupling_si"), py::arg("cutoff_mev"))
        .def_static("tabulated", &SpectralModel::tabulated, py::arg("samples"),
                    py::arg("omega_c_hint") = 0.0)
        .def_readonly("coupling", &SpectralModel::coupling)
        .def_readonly("omega_c", &SpectralModel::omega_c)
        .def_readonly("family", &SpectralModel::family);

    py::class_<BathSpec>(m, "BathSpec")
        .def_static("natural", &BathSpec::natural, py::arg("model"), py::arg("temperature"),
                    py::arg("alpha"))
        .def_static("physical", &BathSpec::physical, py::arg("model"),
                    py::arg("temperature_kelvin"), py::arg("alpha"))
        .def_readonly("model", &BathSpec::model)
        .def_readonly("temperature", &BathSpec::temperature)
        .def_readonly("alpha", &BathSpec::alpha);

    m.def("exciton_gaas_77k", &exciton_gaas_77k);
    m.def("bath_preset", &bath_preset, py::arg("name"));
    m.def("eval_spectral_density", &eval_spectral_density, py::arg("model"), py::arg("omega"));
    m.def("eval_eta", &eval_eta, py::arg("bath"), py::arg("omega"));
    m.def("correlation_time", &correlation_time, py::arg("model"));

    py::class_<QuadratureSettings>(m, "QuadratureSettings")
        .def(py::init(&make_settings), py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-14,
             py::arg("omega_max_factor") = 0.0, py::arg("max_subdivisions") = 10000);

    m.def(
        "gamma_free",
        [](const BathSpec& bath, double t, const QuadratureSettings& q) {
            return gamma_free(bath, t, q);
        },
        py::arg("bath"), py::arg("t"), py::arg("settings") = QuadratureSettings{});
    m.def(
        "gamma_infinity_free",
        [](const BathSpec& bath, const QuadratureSettings& q) {
            return gamma_infinity_free(bath, q);
        },
        py::arg("bath"), py::arg("settings") = QuadratureSettings{});
    m.def(
        "filter_function",
        [](const std::vector<double>& times, double total_t, double omega) {
            return filter_function(make_sequence(times), total_t, omega);
        },
        py::arg("times"), py::arg("total_t"), py::arg("omega"));
    m.def(
        "gamma_controlled_direct",
        [](const BathSpec& bath, const std::vector<double>& times, double t,
           const QuadratureSettings& q) {
            return gamma_controlled_direct(bath, make_sequence(times), t, q);
        },
        py::arg("bath"), py::arg("times"), py::arg("t"),
        py::arg("settings") = QuadratureSettings{});

    py::class_<Gamma0Cache>(m, "Gamma0Cache")
        .def(py::init<BathSpec, QuadratureSettings, double>(), py::arg("bath"),
             py::arg("settings") = QuadratureSettings{}, py::arg("lattice_hint") = 0.0)
        .def("gamma0", &Gamma0Cache::gamma0, py::arg("t"))
        .def("gamma0_infinity", &Gamma0Cache::gamma0_infinity)
        .def("__len__", &Gamma0Cache::size);

    m.def(
        "gamma_controlled_exact",
        [](const Gamma0Cache& cache, const std::vector<double>& times, double t) {
            return gamma_controlled_exact(cache, make_sequence(times), t);
        },
        py::arg("cache"), py::arg("times"), py::arg("t"));
    m.def(
        "delta_gamma_infinity",
        [](const BathSpec& bath, double dt) {
            const auto r = delta_gamma_infinity(bath, dt);
            return py::dict(py::arg("value") = r.value, py::arg("omega_res") = r.omega_res,
                            py::arg("valid") = r.valid,
                            py::arg("neglect_ratio") = r.neglect_ratio);
        },
        py::arg("bath"), py::arg("dt"));
    m.def(
        "saturation_analysis",
        [](const Gamma0Cache& cache, double dt, double epsilon) {
            const auto r = saturation_analysis(cache, dt, epsilon);
            return py::dict(py::arg("dt") = r.dt, py::arg("omega_res") = r.omega_res,
                            py::arg("delta_gamma_inf") = r.delta_gamma_inf,
                            py::arg("n_sat") = r.n_sat, py::arg("t_sat") = r.t_sat,
                            py::arg("t_av") = r.t_av, py::arg("converged") = r.converged,
                            py::arg("validity") = r.validity);
        },
        py::arg("cache"), py::arg("dt"), py::arg("epsilon") = 0.0);
    m.def(
        "t2_effective",
        [](const BathSpec& bath, double dt) {
            const auto r = t2_effective(bath, dt);
            return py::make_tuple(r.rate, r.t2);
        },
        py::arg("bath"), py::arg("dt"));

    // sequence generators return plain time lists
    m.def("gen_pdd", [](double dt, double horizon) {
        return gen_pdd(dt, horizon).to_pulse_sequence().times;
    });
    m.def("gen_cpdd", [](double dt_cp, double horizon) {
        return gen_cpdd(dt_cp, horizon).to_pulse_sequence().times;
    });
    m.def("gen_cdd", [](double dt, int level) {
        return gen_cdd(dt, level).to_pulse_sequence().times;
    });
    m.def("gen_cdd_single", [](double dt, double horizon) {
        return gen_cdd_single(dt, horizon).to_pulse_sequence().times;
    });
    m.def("gen_pcdd", [](double dt, int level, double horizon) {
        return gen_pcdd(dt, level, horizon).to_pulse_sequence().times;
    });
    m.def("gen_udd", [](int n, double total) { return gen_udd(n, total).times; });
    m.def("udd_max_pulses", &udd_max_pulses, py::arg("total"), py::arg("dt_min"));
    m.def("udd_effective_time", &udd_effective_time, py::arg("n"), py::arg("model"));
    m.def("gen_interp_abrupt", [](double dt_min, double horizon) {
        return gen_interp_abrupt(dt_min, horizon).to_pulse_sequence().times;
    });
    m.def("gen_interp_smooth", [](double dt_min, double delta2, double horizon) {
        return gen_interp_smooth(dt_min, delta2, horizon).to_pulse_sequence().times;
    });
    m.def(
        "check_constraint",
        [](const std::vector<double>& times, double dt_min, double horizon) {
            const auto r = check_constraint(make_sequence(times), dt_min, horizon);
            return py::dict(py::arg("min_gap") = r.min_gap,
                            py::arg("constraint_ok") = r.constraint_ok,
                            py::arg("pulse_count") = r.pulse_count);
        },
        py::arg("times"), py::arg("dt_min"), py::arg("horizon"));

    m.def(
        "verify_second_order",
        [](const std::vector<double>& times, double total) {
            const auto r = verify_second_order(make_sequence(times), total);
            return py::dict(py::arg("a1") = r.a1, py::arg("a2") = r.a2,
                            py::arg("cancels") = r.cancels, py::arg("exact") = r.exact);
        },
        py::arg("times"), py::arg("total"));

    m.def(
        "compute_trace",
        [](const Gamma0Cache& cache, const std::vector<double>& times, double horizon,
           double step, int threads) {
            const auto trace =
                compute_trace(cache, make_sequence(times), horizon, {step, threads});
            return py::make_tuple(trace.grid, trace.gamma, trace.coherence);
        },
        py::arg("cache"), py::arg("times"), py::arg("horizon"), py::arg("step"),
        py::arg("threads") = 1);
}

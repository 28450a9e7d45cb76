#include "dephase/recursion.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace dephase {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace

Gamma0Cache::Gamma0Cache(BathSpec bath, QuadratureSettings settings, double lattice_hint)
    : bath_(std::move(bath)), settings_(settings), lattice_(lattice_hint) {
    bath_.validate();
    settings_.validate();
    if (lattice_ < 0.0) throw ParamError("lattice spacing must be >= 0");
}

std::size_t Gamma0Cache::size() const {
    std::shared_lock lock(mutex_);
    return lattice_memo_.size() + exact_memo_.size();
}

double Gamma0Cache::gamma0(double t) const {
    if (t < 0.0) throw DomainError("Gamma_0 requires t >= 0");
    if (t == 0.0) return 0.0;

    bool on_lattice = false;
    std::int64_t index = 0;
    double eval_t = t;
    if (lattice_ > 0.0) {
        const double k = std::round(t / lattice_);
        // snap tolerance covers ulp-level noise from forming time differences
        // while staying far below half a lattice spacing
        const double snap = std::max(1e-9 * lattice_,
                                     64.0 * std::numeric_limits<double>::epsilon() * t);
        if (std::abs(t - k * lattice_) <= snap && k > 0.0 && k < 9.2e18 &&
            snap < 0.5 * lattice_) {
            on_lattice = true;
            index = static_cast<std::int64_t>(k);
            eval_t = k * lattice_;
        }
    }
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(t);

    {
        std::shared_lock lock(mutex_);
        if (on_lattice) {
            auto it = lattice_memo_.find(index);
            if (it != lattice_memo_.end()) return it->second;
        } else {
            auto it = exact_memo_.find(bits);
            if (it != exact_memo_.end()) return it->second;
        }
    }

    const double value = gamma_free(bath_, eval_t, settings_);
    {
        std::unique_lock lock(mutex_);
        if (on_lattice)
            lattice_memo_.emplace(index, value);
        else
            exact_memo_.emplace(bits, value);
    }
    return value;
}

double Gamma0Cache::gamma0_infinity() const {
    {
        std::shared_lock lock(mutex_);
        if (have_infinity_) return infinity_value_;
    }
    const double value = gamma_infinity_free(bath_, settings_);
    std::unique_lock lock(mutex_);
    infinity_value_ = value;
    have_infinity_ = true;
    return value;
}

double gamma_controlled_exact(const Gamma0Cache& cache, const PulseSequence& seq, double t) {
    seq.validate();
    if (t < 0.0) throw DomainError("gamma_controlled_exact requires t >= 0");
    const std::size_t n = seq.pulses_before(t);
    const auto& ts = seq.times;

    Kahan acc;
    // 2 sum_m (-1)^(m+1) Gamma_0(t_m), m = 1..n
    for (std::size_t m = 1; m <= n; ++m)
        acc.add(2.0 * ((m % 2 == 1) ? 1.0 : -1.0) * cache.gamma0(ts[m - 1]));
    // 4 sum_{m=2}^{n} sum_{j<m} (-1)^(m-1+j) Gamma_0(t_m - t_j)
    for (std::size_t m = 2; m <= n; ++m)
        for (std::size_t j = 1; j < m; ++j)
            acc.add(4.0 * (((m - 1 + j) % 2 == 0) ? 1.0 : -1.0) *
                    cache.gamma0(ts[m - 1] - ts[j - 1]));
    // 2 sum_m (-1)^(m+n) Gamma_0(t - t_m)
    for (std::size_t m = 1; m <= n; ++m)
        acc.add(2.0 * (((m + n) % 2 == 0) ? 1.0 : -1.0) * cache.gamma0(t - ts[m - 1]));
    // (-1)^n Gamma_0(t)
    acc.add(((n % 2 == 0) ? 1.0 : -1.0) * cache.gamma0(t));
    return acc.sum;
}

double gamma_recurrence_step(const Gamma0Cache& cache, std::span<const double> prefix,
                             double t_n, double t) {
    if (t < t_n) throw DomainError("recurrence step requires t >= t_n");
    PulseSequence head;
    head.times.assign(prefix.begin(), prefix.end());
    head.validate();
    if (!head.times.empty() && !(t_n > head.times.back()))
        throw ParamError("t_n must extend the prefix");
    const double g_prev_t = gamma_controlled_exact(cache, head, t);
    const double g_prev_tn = gamma_controlled_exact(cache, head, t_n);
    return -g_prev_t + 2.0 * g_prev_tn + 2.0 * cache.gamma0(t - t_n);
}

ControlledGamma::ControlledGamma(const Gamma0Cache& cache, PulseSequence seq)
    : cache_(cache), seq_(std::move(seq)) {
    seq_.validate();
    const auto& ts = seq_.times;
    prefix_.resize(ts.size() + 1, 0.0);
    Kahan acc;
    for (std::size_t m = 1; m <= ts.size(); ++m) {
        acc.add(2.0 * ((m % 2 == 1) ? 1.0 : -1.0) * cache_.gamma0(ts[m - 1]));
        for (std::size_t j = 1; j < m; ++j)
            acc.add(4.0 * (((m - 1 + j) % 2 == 0) ? 1.0 : -1.0) *
                    cache_.gamma0(ts[m - 1] - ts[j - 1]));
        prefix_[m] = acc.sum;
    }
}

double ControlledGamma::at(double t) const {
    if (t < 0.0) throw DomainError("Gamma requires t >= 0");
    const std::size_t n = seq_.pulses_before(t);
    Kahan acc;
    acc.add(prefix_[n]);
    for (std::size_t m = 1; m <= n; ++m)
        acc.add(2.0 * (((m + n) % 2 == 0) ? 1.0 : -1.0) * cache_.gamma0(t - seq_.times[m - 1]));
    acc.add(((n % 2 == 0) ? 1.0 : -1.0) * cache_.gamma0(t));
    return acc.sum;
}

TwoPulseImprovement two_pulse_improvement(const Gamma0Cache& cache, double t1, double t2) {
    if (!(0.0 < t1 && t1 < t2)) throw DomainError("need 0 < t1 < t2");
    if (!cache.bath().model.is_supraohmic())
        throw UnsupportedError("asymptotic improvement needs a finite Gamma_0(infinity)");
    const double lhs = 2.0 * cache.gamma0(t2) - 2.0 * cache.gamma0(t1);
    const double rhs = 4.0 * cache.gamma0(t2 - t1);
    return {lhs - rhs, lhs > rhs};
}

double delta_gamma_n(const Gamma0Cache& cache, const PulseSequence& seq, int n) {
    seq.validate();
    if (n < 1 || seq.times.size() < static_cast<std::size_t>(n) + 1)
        throw DomainError("delta_gamma_n needs n >= 1 and a sequence with >= n+1 pulses");
    const auto& ts = seq.times;
    const double sn = (n % 2 == 0) ? 1.0 : -1.0;
    Kahan acc;
    acc.add(sn * (cache.gamma0(ts[n]) - cache.gamma0(ts[n - 1])));
    for (int j = 1; j <= n; ++j)
        acc.add(2.0 * (((n + j) % 2 == 0) ? 1.0 : -1.0) * cache.gamma0(ts[n] - ts[j - 1]));
    for (int j = 1; j <= n - 1; ++j)
        acc.add(-2.0 * (((n + j) % 2 == 0) ? 1.0 : -1.0) * cache.gamma0(ts[n - 1] - ts[j - 1]));
    return acc.sum;
}

double delta_gamma_pdd(const Gamma0Cache& cache, double dt, int n) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (n < 1) throw DomainError("n must be >= 1");
    const double sn = (n % 2 == 0) ? 1.0 : -1.0;
    Kahan acc;
    acc.add(sn * (cache.gamma0((n + 1) * dt) - 3.0 * cache.gamma0(n * dt)));
    for (int k = 1; k <= n - 1; ++k)
        acc.add(-4.0 * ((k % 2 == 0) ? 1.0 : -1.0) * cache.gamma0(k * dt));
    return acc.sum;
}

double delta_gamma_pdd_offset(const Gamma0Cache& cache, double dt, int n, double t_offset) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (n < 1) throw DomainError("n must be >= 1");
    if (t_offset < 0.0 || t_offset > dt)
        throw DomainError("t_offset must lie in [0, dt]");
    PulseSequence pdd;
    for (int k = 1; k <= n + 1; ++k) pdd.times.push_back(k * dt);
    // Gamma_{n+1}(t~ + t_{n+1}) - Gamma_n(t~ + t_n); at t~ = 0 the left value
    // uses the (n+1)-pulse branch, equal to Gamma_n(t_{n+1}) by continuity.
    const double t_hi = (n + 1) * dt + t_offset;
    const double t_lo = n * dt + t_offset;
    const double hi = t_offset == 0.0
                          ? gamma_controlled_exact(cache, pdd, std::nextafter(t_hi, t_hi + dt))
                          : gamma_controlled_exact(cache, pdd, t_hi);
    const double lo = t_offset == 0.0
                          ? gamma_controlled_exact(cache, pdd, std::nextafter(t_lo, t_lo + dt))
                          : gamma_controlled_exact(cache, pdd, t_lo);
    return hi - lo;
}

DeltaGammaInfinity delta_gamma_infinity(const BathSpec& bath, double dt) {
    bath.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    DeltaGammaInfinity out;
    out.omega_res = pi / dt;
    const double eta_res = eval_eta(bath, out.omega_res);
    out.value = 8.0 * out.omega_res * eta_res;
    const double eta_3res = eval_eta(bath, 3.0 * out.omega_res);
    out.neglect_ratio = eta_res > 0.0 ? eta_3res / eta_res : 0.0;
    out.valid = eta_res <= 0.0 || out.neglect_ratio <= 0.01;
    return out;
}

TiTdSplit ti_td_split(const Gamma0Cache& cache, double dt, int n, double t_offset) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (n < 1) throw DomainError("n must be >= 1");
    if (t_offset < 0.0 || t_offset > dt) throw DomainError("t_offset must lie in [0, dt]");
    const double sn = (n % 2 == 0) ? 1.0 : -1.0;
    TiTdSplit out;
    out.td = sn * (cache.gamma0(n * dt + t_offset) - cache.gamma0((n + 1) * dt + t_offset));
    Kahan acc;
    acc.add(cache.gamma0((n + 1) * dt));
    for (int j = 1; j <= n; ++j)
        acc.add(2.0 * ((j % 2 == 0) ? 1.0 : -1.0) * cache.gamma0((n + 1 - j) * dt));
    out.ti = 2.0 * sn * acc.sum;
    return out;
}

AsymptoticReport saturation_analysis(const Gamma0Cache& cache, double dt, double epsilon) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    constexpr int n_max = 10000;
    constexpr int run_length = 10;

    AsymptoticReport report;
    report.dt = dt;
    const DeltaGammaInfinity dgi = delta_gamma_infinity(cache.bath(), dt);
    report.omega_res = dgi.omega_res;
    report.delta_gamma_inf = dgi.value;
    report.validity = dgi.valid;

    const bool supraohmic = cache.bath().model.is_supraohmic();
    const double g_inf = supraohmic ? cache.gamma0_infinity() : 0.0;

    if (epsilon > 0.0) {
        report.epsilon = epsilon;
    } else {
        // default 0.02 * DeltaGamma_inf, floored at the numerical resolution
        // of the Gamma_0 sums (hard cutoffs can push DeltaGamma_inf below
        // anything quadrature can resolve)
        const double scale = supraohmic ? g_inf : std::abs(cache.gamma0(dt));
        const double floor = 1e3 * std::max(cache.settings().abs_tol,
                                            cache.settings().rel_tol * scale);
        report.epsilon = std::max(0.02 * dgi.value, floor);
    }

    // Incremental Delta Gamma_n^PDD series: the alternating sum over
    // Gamma_0(k dt) is shared between consecutive n.
    std::vector<double> dg;
    Kahan alt_sum; // sum_{k=1}^{m-1} (-1)^k Gamma_0(k dt) after m-1 terms
    auto delta_pdd = [&](int m) {
        while (static_cast<int>(dg.size()) < m) {
            const int k = static_cast<int>(dg.size()) + 1;
            const double sk = (k % 2 == 0) ? 1.0 : -1.0;
            dg.push_back(sk * (cache.gamma0((k + 1) * dt) - 3.0 * cache.gamma0(k * dt)) -
                         4.0 * alt_sum.sum);
            alt_sum.add(sk * cache.gamma0(k * dt));
        }
        return dg[m - 1];
    };
    auto delta_ok = [&](int m) { return std::abs(delta_pdd(m) - dgi.value) < report.epsilon; };

    double checkpoint_dev = -1.0;
    for (int n = 1; n <= n_max; ++n) {
        double dev;
        if (supraohmic) {
            dev = std::abs(cache.gamma0(n * dt) - g_inf);
        } else {
            dev = std::abs(delta_pdd(n) - dgi.value);
        }
        if (dev < report.epsilon) {
            bool run = true;
            for (int m = n; m < n + run_length; ++m)
                if (!delta_ok(m)) {
                    run = false;
                    break;
                }
            if (run) {
                report.n_sat = n;
                report.t_sat = n * dt;
                report.converged = true;
                break;
            }
        } else if ((n & (n - 1)) == 0 && n >= 512) {
            // Bail out early when the measured decay between checkpoints is
            // power-law slow and even a 1/n^2 projection cannot reach epsilon
            // within the budget.
            if (checkpoint_dev > 0.0 && dev > 0.1 * checkpoint_dev) {
                const double n_required = n * std::sqrt(dev / report.epsilon);
                if (n_required > static_cast<double>(n_max))
                    throw ConvergenceError(
                        "saturation index projected beyond n = 10^4 for these parameters");
            }
            checkpoint_dev = dev;
        }
    }
    if (!report.converged)
        throw ConvergenceError("saturation index not found within n = 10^4");

    // t_av: zero of the centered second difference of Gamma_0, located by sign
    // change on the dt lattice and refined by linear interpolation.  If the
    // inflection sits below the first lattice point, rescan with a finer step.
    auto locate_inflection = [&](double h) -> double {
        auto second_diff = [&](int k) {
            return (cache.gamma0((k - 1) * h) - 2.0 * cache.gamma0(k * h) +
                    cache.gamma0((k + 1) * h)) /
                   (h * h);
        };
        double prev = second_diff(1);
        if (prev <= 0.0) return -h; // negative sentinel: inflection below first point
        const int limit = static_cast<int>(std::max(report.t_sat, 10.0 * h) / h) + 10;
        for (int k = 2; k <= limit; ++k) {
            const double cur = second_diff(k);
            if (prev > 0.0 && cur <= 0.0)
                return (k - 1) * h + h * prev / (prev - cur);
            prev = cur;
        }
        return 0.0;
    };
    double t_av = locate_inflection(dt);
    if (t_av < 0.0) t_av = std::abs(locate_inflection(dt / 16.0));
    report.t_av = t_av;
    return report;
}

} // namespace dephase

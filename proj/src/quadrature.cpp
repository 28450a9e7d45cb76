#include "dephase/quadrature.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace dephase {

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw ParamError("quadrature tolerances must be positive");
    if (omega_max_factor != 0.0 && omega_max_factor < 10.0)
        throw ParamError("omega_max_factor must be >= 10 (or 0 for the family default)");
    if (max_subdivisions < 1)
        throw ParamError("max_subdivisions must be >= 1");
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule (QUADPACK).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = fc * wg[3];
    double result_kronrod = fc * wgk[7];
    double resabs = std::abs(result_kronrod);

    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) // xgk[1,3,5] are the Gauss nodes
            result_gauss += wg[j / 2] * (f1 + f2);
    }

    const double mean = 0.5 * result_kronrod;
    double resasc = wgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    result_kronrod *= half;
    result_gauss *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs(result_kronrod - result_gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double min_err = 50.0 * eps * resabs;
    if (min_err > std::numeric_limits<double>::min())
        err = std::max(err, min_err);

    return Panel{a, b, result_kronrod, err};
}

} // namespace

IntegralResult gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    Panel p = evaluate_panel(f, a, b);
    return {p.value, p.error, 15, true};
}

IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  const std::vector<double>& edges,
                                  const QuadratureSettings& settings,
                                  bool allow_failure) {
    settings.validate();
    if (edges.size() < 2)
        throw ParamError("integrate_adaptive needs at least two panel edges");

    std::priority_queue<Panel> heap;
    long evaluations = 0;
    double total = 0.0, total_err = 0.0;

    auto push_panel = [&](double a, double b) {
        if (!(b > a)) return;
        Panel p = evaluate_panel(f, a, b);
        evaluations += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    };

    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        push_panel(edges[i], edges[i + 1]);

    auto tolerance = [&]() { return std::max(settings.abs_tol, settings.rel_tol * std::abs(total)); };

    int splits = 0;
    while (total_err > tolerance() && splits < settings.max_subdivisions) {
        Panel worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // panel at machine resolution; keep its estimate and stop refining it
            total += worst.value;
            total_err += worst.error;
            break;
        }
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
        ++splits;
    }

    // Re-accumulate from the heap for a cleanly ordered sum.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0, carry = 0.0, err = 0.0;
    for (const Panel& p : panels) {
        // Kahan-compensated accumulation
        const double y = p.value - carry;
        const double t = value + y;
        carry = (t - value) - y;
        value = t;
        err += p.error;
    }

    const bool ok = err <= std::max(settings.abs_tol, settings.rel_tol * std::abs(value));
    if (!ok && !allow_failure)
        throw AccuracyError("quadrature did not converge within max_subdivisions", err,
                            std::max(settings.abs_tol, settings.rel_tol * std::abs(value)));
    return {value, err, evaluations, ok};
}

std::vector<double> uniform_edges(double a, double b, double max_width, std::size_t max_panels) {
    if (!(b > a)) return {a, b};
    std::size_t n = max_width > 0.0 ? static_cast<std::size_t>(std::ceil((b - a) / max_width)) : 1;
    n = std::clamp<std::size_t>(n, 1, max_panels);
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    edges.front() = a;
    edges.back() = b;
    return edges;
}

std::vector<double> oscillation_edges(double a, double b, double phase_rate,
                                      const std::vector<double>& interior,
                                      std::size_t max_panels) {
    constexpr double pi = 3.141592653589793238462643383279502884;
    std::set<double> pts{a, b};
    for (double x : interior)
        if (x > a && x < b) pts.insert(x);
    if (phase_rate > 0.0) {
        const double width = pi / phase_rate;
        const std::size_t count = static_cast<std::size_t>((b - a) / width);
        if (count + pts.size() <= max_panels) {
            for (double x = a + width; x < b; x += width) pts.insert(x);
        } else {
            // cap the panel count; adaptive refinement picks up the slack
            const std::vector<double> u = uniform_edges(a, b, (b - a) / static_cast<double>(max_panels));
            pts.insert(u.begin(), u.end());
        }
    }
    return {pts.begin(), pts.end()};
}

} // namespace dephase

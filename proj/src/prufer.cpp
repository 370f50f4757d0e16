#include "wvn/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wvn/errors.hpp"
#include "wvn/ode.hpp"

namespace wvn {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_to_pi(double t) {
    t = std::fmod(t + pi, 2 * pi);
    if (t < 0) t += 2 * pi;
    return t - pi;
}

std::vector<double> log_spaced(double a, double b, int n) {
    if (!(b > a) || !(a > 0)) throw std::invalid_argument("sample grid: need 0 < x_start < x_max");
    if (n < 2) throw std::invalid_argument("sample grid: need at least 2 samples");
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    xs.front() = a;
    xs.back() = b;
    return xs;
}

double max_step_for(const operator_data& data, double eta, const solve_config& cfg) {
    double fmax = 0;
    for (const auto& t : data.terms) fmax = std::max(fmax, std::abs(t.phi));
    return cfg.max_step_fraction * 2 * pi / (fmax + std::abs(eta) + 1.0);
}

ode_options options_for(const operator_data& data, double eta, const solve_config& cfg) {
    ode_options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_step = max_step_for(data, eta, cfg);
    return opt;
}

} // namespace

boundary_condition boundary_condition::from_theta0(double t) {
    return {wrap_to_pi(t)};
}

boundary_condition boundary_condition::from_omega_angle(double w) {
    double t = std::fmod(w - pi / 4, pi);
    if (t < -pi / 2) t += pi;
    if (t >= pi / 2) t -= pi;
    return {t};
}

prufer_trajectory integrate_prufer(const operator_data& data, double eta,
                                   const boundary_condition& bc, const solve_config& cfg) {
    const auto xs = log_spaced(cfg.x_start, cfg.x_max, cfg.sample_count);
    dop853_stepper<2> stepper(options_for(data, eta, cfg));

    auto rhs = [&](double x, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const std::complex<double> w =
            std::polar(1.0, eta * x + 2 * y[0]) * evaluate_phi(data, x);
        dy[0] = -w.imag();
        dy[1] = w.real();
    };

    prufer_trajectory out;
    out.x = xs;
    out.theta.resize(xs.size());
    out.log_r.resize(xs.size());
    std::array<double, 2> y{bc.theta0, 0.0};
    double x = cfg.x_start;
    out.theta[0] = y[0];
    out.log_r[0] = y[1];

    double theta_prev = y[0];
    auto obs = [&theta_prev](double, const std::array<double, 2>& yy) {
        // the oscillation-aware step cap keeps theta resolved
        if (std::abs(yy[0] - theta_prev) >= pi / 2)
            throw numerical_error("integrate_prufer: theta moved more than pi/2 in one step");
        theta_prev = yy[0];
    };

    for (std::size_t i = 1; i < xs.size(); ++i) {
        stepper.advance(rhs, x, y, xs[i], obs);
        out.theta[i] = y[0];
        out.log_r[i] = y[1];
    }
    return out;
}

vector_trajectory integrate_direct(const operator_data& data, double eta,
                                   std::complex<double> u1_0, std::complex<double> u2_0,
                                   const solve_config& cfg) {
    if (std::abs(u1_0) == 0 && std::abs(u2_0) == 0)
        throw std::invalid_argument("integrate_direct: u0 must be nonzero");
    const auto xs = log_spaced(cfg.x_start, cfg.x_max, cfg.sample_count);
    dop853_stepper<4> stepper(options_for(data, eta, cfg));
    const double E = eta / 2;

    auto rhs = [&](double x, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        const std::complex<double> u1{y[0], y[1]}, u2{y[2], y[3]};
        const std::complex<double> ph = evaluate_phi(data, x);
        const std::complex<double> d1 = std::complex<double>(0, -1) * (E * u1 - ph * u2);
        const std::complex<double> d2 = std::complex<double>(0, 1) * (E * u2 - std::conj(ph) * u1);
        dy[0] = d1.real();
        dy[1] = d1.imag();
        dy[2] = d2.real();
        dy[3] = d2.imag();
    };

    vector_trajectory out;
    out.x = xs;
    out.u1.resize(xs.size());
    out.u2.resize(xs.size());
    std::array<double, 4> y{u1_0.real(), u1_0.imag(), u2_0.real(), u2_0.imag()};
    double x = cfg.x_start;
    out.u1[0] = u1_0;
    out.u2[0] = u2_0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        stepper.advance(rhs, x, y, xs[i]);
        out.u1[i] = {y[0], y[1]};
        out.u2[i] = {y[2], y[3]};
    }
    return out;
}

std::pair<std::complex<double>, std::complex<double>>
initial_vector(double eta, const boundary_condition& bc, double x_start, double r0) {
    const double phase = eta / 2 * x_start + bc.theta0;
    const std::complex<double> a{1, 1}, b{1, -1};
    return {r0 * a * std::polar(1.0, -phase), r0 * b * std::polar(1.0, phase)};
}

prufer_trajectory prufer_from_vector(const vector_trajectory& traj, double eta) {
    prufer_trajectory out;
    const std::size_t n = traj.x.size();
    out.x = traj.x;
    out.theta.resize(n);
    out.log_r.resize(n);
    const std::complex<double> one_plus_i{1, 1};
    double prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mod = std::abs(traj.u1[i]);
        if (mod < 1e-300)
            throw numerical_error("prufer_from_vector: u1 vanishes on the grid");
        const double raw = -std::arg(traj.u1[i] / one_plus_i) - eta / 2 * traj.x[i];
        double t;
        if (i == 0) {
            t = wrap_to_pi(raw);
        } else {
            t = prev + wrap_to_pi(raw - prev);
        }
        out.theta[i] = t;
        prev = t;
        out.log_r[i] = std::log(mod / std::sqrt(2.0));
    }
    const double base = out.log_r[0];
    for (auto& v : out.log_r) v -= base;
    return out;
}

wronskian_series wronskian(const vector_trajectory& a, const vector_trajectory& b) {
    if (a.x.size() != b.x.size())
        throw std::invalid_argument("wronskian: trajectories need a common grid");
    wronskian_series out;
    out.x = a.x;
    out.w.resize(a.x.size());
    const std::complex<double> im{0, 1};
    for (std::size_t i = 0; i < a.x.size(); ++i)
        out.w[i] = im * (a.u1[i] * b.u2[i] - a.u2[i] * b.u1[i]);
    const double w0 = std::abs(out.w.front());
    double drift = 0;
    if (w0 > 0)
        for (const auto& w : out.w) drift = std::max(drift, std::abs(w - out.w.front()) / w0);
    out.max_rel_drift = drift;
    return out;
}

std::vector<double> subordinacy_ratio(const vector_trajectory& a, const vector_trajectory& b) {
    if (a.x.size() != b.x.size())
        throw std::invalid_argument("subordinacy_ratio: trajectories need a common grid");
    const std::size_t n = a.x.size();
    auto norm2 = [](const vector_trajectory& t, std::size_t i) {
        return std::norm(t.u1[i]) + std::norm(t.u2[i]);
    };
    std::vector<double> out(n);
    out[0] = norm2(a, 0) / norm2(b, 0);
    double ia = 0, ib = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dx = a.x[i] - a.x[i - 1];
        ia += 0.5 * dx * (norm2(a, i) + norm2(a, i - 1));
        ib += 0.5 * dx * (norm2(b, i) + norm2(b, i - 1));
        out[i] = ia / ib;
    }
    return out;
}

line_fit fit_line(const std::vector<double>& z, const std::vector<double>& y) {
    if (z.size() != y.size() || z.size() < 2)
        throw std::invalid_argument("fit_line: need matching series with >= 2 points");
    const double n = static_cast<double>(z.size());
    double sz = 0, sy = 0;
    for (std::size_t i = 0; i < z.size(); ++i) { sz += z[i]; sy += y[i]; }
    const double mz = sz / n, my = sy / n;
    double szz = 0, szy = 0, syy = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        szz += (z[i] - mz) * (z[i] - mz);
        szy += (z[i] - mz) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    line_fit f;
    f.slope = szz > 0 ? szy / szz : 0;
    f.intercept = my - f.slope * mz;
    f.r2 = (syy > 0 && szz > 0) ? (szy * szy) / (szz * syy) : 1.0;
    return f;
}

boundedness_report boundedness_diagnostic(const prufer_trajectory& traj, std::optional<double> d) {
    const std::size_t n = traj.x.size();
    if (n < 4) throw std::invalid_argument("boundedness_diagnostic: trajectory too short");
    const double x0 = traj.x.front(), x1 = traj.x.back();
    const int windows = static_cast<int>(std::floor(std::log2(x1 / x0)));
    if (windows < 3)
        throw std::invalid_argument("boundedness_diagnostic: need at least 3 dyadic windows");

    boundedness_report rep;
    rep.window_sup.assign(static_cast<std::size_t>(windows), -INFINITY);
    for (std::size_t i = 0; i < n; ++i) {
        int w = static_cast<int>(std::floor(std::log2(traj.x[i] / x0)));
        if (w >= windows) w = windows - 1;
        if (w < 0) w = 0;
        auto& s = rep.window_sup[static_cast<std::size_t>(w)];
        s = std::max(s, traj.log_r[i]);
    }

    // slopes are asymptotic estimates: fit on the tail half (in log x) so
    // the approach transient does not pollute them
    const double x_mid = std::sqrt(x0 * x1);
    std::vector<double> zx, zlog, y;
    for (std::size_t i = 0; i < n; ++i) {
        if (traj.x[i] < x_mid) continue;
        zx.push_back(traj.x[i]);
        zlog.push_back(std::log(traj.x[i]));
        y.push_back(traj.log_r[i]);
    }
    rep.slope_vs_x = fit_line(zx, y).slope;
    const line_fit lf = fit_line(zlog, y);
    rep.slope_vs_log = lf.slope;
    rep.r2_vs_log = lf.r2;
    rep.fitted_B = -lf.slope;
    if (d && std::abs(1.0 - *d) > 1e-9 && std::abs(*d) > 1e-9) {
        std::vector<double> zk;
        zk.reserve(zx.size());
        for (double xv : zx) zk.push_back(std::pow(xv, 1.0 - *d));
        rep.slope_vs_x_kappa = fit_line(zk, y).slope;
    }

    const double gap = std::abs(rep.window_sup[static_cast<std::size_t>(windows - 1)] -
                                rep.window_sup[static_cast<std::size_t>(windows - 2)]);
    if (!std::isfinite(gap)) {
        rep.verdict = boundedness_verdict::indeterminate;  // a window had no samples
        return rep;
    }
    if (gap < 0.5 && rep.slope_vs_log < 0.05)
        rep.verdict = boundedness_verdict::bounded;
    else if (rep.slope_vs_log > 0.1 && rep.r2_vs_log > 0.9)
        rep.verdict = boundedness_verdict::power_growth;
    else if (rep.slope_vs_log < -0.1 && rep.r2_vs_log > 0.9)
        rep.verdict = boundedness_verdict::power_decay;
    else
        rep.verdict = boundedness_verdict::indeterminate;
    return rep;
}

const char* to_string(boundedness_verdict v) {
    switch (v) {
        case boundedness_verdict::bounded: return "bounded";
        case boundedness_verdict::power_decay: return "power_decay";
        case boundedness_verdict::power_growth: return "power_growth";
        case boundedness_verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

} // namespace wvn

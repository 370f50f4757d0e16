#include "wvn/eigen_construct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wvn/errors.hpp"
#include "wvn/exceptional_set.hpp"
#include "wvn/ode.hpp"
#include "wvn/recursion.hpp"

namespace wvn {

namespace {

constexpr double pi = std::numbers::pi;

void guard_denominators(std::span<const double> freqs, double eta) {
    for (double f : freqs)
        if (std::abs(f - eta) < 1e-12)
            throw numerical_error("condition evaluation: |phi_j - eta| below the pole guard");
}

} // namespace

double second_order_residual(std::span<const std::complex<double>> c,
                             std::span<const double> freqs, double eta) {
    if (c.size() != freqs.size())
        throw std::invalid_argument("second_order_residual: amplitude/frequency size mismatch");
    guard_denominators(freqs, eta);
    double s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) s += std::norm(c[j]) / (freqs[j] - eta);
    return std::abs(s);
}

double fourth_order_residual(std::span<const std::complex<double>> c,
                             std::span<const double> freqs, double eta) {
    if (c.size() != freqs.size())
        throw std::invalid_argument("fourth_order_residual: amplitude/frequency size mismatch");
    guard_denominators(freqs, eta);
    double s = 0;
    for (std::size_t j1 = 0; j1 < c.size(); ++j1)
        for (std::size_t j2 = 0; j2 < c.size(); ++j2) {
            const double d1 = freqs[j1] - eta, d2 = freqs[j2] - eta;
            s += std::norm(c[j1]) * std::norm(c[j2]) * (freqs[j1] + freqs[j2] - 2 * eta) /
                 (d1 * d1 * d2 * d2);
        }
    return std::abs(s);
}

std::pair<double, double> verify_conditions(const example_spec& spec, double eta) {
    const double freqs[3] = {spec.phi, spec.psi, spec.rho};
    guard_denominators(freqs, eta);
    const double a2 = std::norm(spec.a), b2 = std::norm(spec.b), c2 = std::norm(spec.c);
    const double dphi = spec.phi - eta, dpsi = spec.psi - eta, drho = spec.rho - eta;

    const double second = a2 / dphi + b2 / dpsi + c2 / drho;
    const double fourth =
        a2 * a2 / (dphi * dphi * dphi) + b2 * b2 / (dpsi * dpsi * dpsi) +
        c2 * c2 / (drho * drho * drho) +
        a2 * b2 / (dphi * dphi * dpsi * dpsi) * (spec.phi + spec.psi - 2 * eta) +
        a2 * c2 / (dphi * dphi * drho * drho) * (spec.phi + spec.rho - 2 * eta) +
        b2 * c2 / (dpsi * dpsi * drho * drho) * (spec.psi + spec.rho - 2 * eta);
    return {std::abs(second), std::abs(fourth)};
}

std::complex<double> compute_lambda(const example_spec& spec) {
    const double tol = 1e-9;
    if (std::abs(spec.phi - spec.psi) < tol || std::abs(spec.phi - spec.rho) < tol ||
        std::abs(spec.psi - spec.rho) < tol)
        throw std::invalid_argument("compute_lambda: frequencies must be distinct");
    recursion_engine eng;
    const auto f31 = eng.f(spec.eta, {spec.phi, spec.psi}, {spec.rho});
    if (f31.pole) throw numerical_error("compute_lambda: pole guard hit in f_{3,1}");
    const double C = 2;  // 2! * 1! distinct permutation pairs
    return C * f31.value * spec.a * spec.b * std::conj(spec.c);
}

std::complex<double> f40_closed(double eta, double phi1, double phi2) {
    const double d1 = phi1 - eta, d2 = phi2 - eta;
    if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
        throw numerical_error("f40_closed: pole guard hit");
    return std::complex<double>(0, -0.5) * (phi1 + phi2 - 2 * eta) / (d1 * d1 * d2 * d2);
}

std::pair<std::complex<double>, std::complex<double>>
compute_omega(const example_spec& spec, double eta) {
    const double freqs[3] = {spec.phi, spec.psi, spec.rho};
    const std::complex<double> amps[3] = {spec.a, spec.b, spec.c};
    guard_denominators(freqs, eta);

    std::complex<double> om2{0, 0};
    for (int j = 0; j < 3; ++j)
        om2 += std::complex<double>(0, -1) * std::norm(amps[j]) / (freqs[j] - eta);

    std::complex<double> om4{0, 0};
    for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 3; ++j2)
            om4 += f40_closed(eta, freqs[j1], freqs[j2]) * std::norm(amps[j1]) * std::norm(amps[j2]);
    return {om2, om4};
}

example_spec solve_coefficients(double phi, double psi, double rho,
                                double a_mod, double b_mod, double delta) {
    if (!(psi < rho && rho < phi))
        throw std::invalid_argument("solve_coefficients: need psi < rho < phi");
    if (std::abs(2 * rho - phi - psi - 1.0) > 1e-12)
        throw validation_error("solve_coefficients: frequencies must satisfy 2 rho - phi - psi = 1");
    const int p = 5;
    if (!(delta > 1.0 / p && delta <= 1.0 / (p - 2) + 1e-15))
        throw std::invalid_argument("solve_coefficients: delta must lie in (1/p, 1/(p-2)]");

    const double c2 = a_mod * a_mod / (psi - rho) + b_mod * b_mod / (phi - rho);
    if (!(c2 > 0))
        throw validation_error("solve_coefficients: infeasible amplitudes, |c|^2 <= 0");

    example_spec spec;
    spec.phi = phi;
    spec.psi = psi;
    spec.rho = rho;
    spec.a = a_mod;
    spec.b = b_mod;
    spec.c = std::sqrt(c2);
    spec.delta = delta;
    spec.p = p;
    spec.eta = phi + psi - rho;
    spec.energy = spec.eta / 2;

    const auto [r2, r4] = verify_conditions(spec, spec.eta);
    if (r2 > 1e-10 * (1 + c2) || r4 > 1e-8 * (1 + c2 * c2))
        throw numerical_error("solve_coefficients: coefficient conditions failed to close");

    // eta must avoid S_{p-2} (rational independence, checked numerically)
    const auto s3 = build_sp({phi, psi, rho}, p - 2);
    if (is_exceptional(spec.energy, s3, 1e-9))
        throw validation_error("solve_coefficients: eta collides with S_{p-2}; frequencies look rationally dependent");

    spec.lambda = compute_lambda(spec);
    spec.target_phase = branch_phase(spec, example_branch::decay);
    return spec;
}

decay_prediction predicted_decay(const example_spec& spec) {
    decay_prediction out;
    out.B = std::abs(spec.lambda);
    out.degenerate = out.B < 1e-14;
    out.form = std::abs(spec.delta - 1.0 / (spec.p - 2)) < 1e-12
                   ? decay_prediction::form_t::power
                   : decay_prediction::form_t::stretched_exponential;
    return out;
}

double branch_phase(const example_spec& spec, example_branch br) {
    const double arg = std::arg(spec.lambda);
    const double psi = br == example_branch::decay ? pi - arg : -arg;
    return std::remainder(psi, 2 * pi);
}

xi_build_result build_xi(const example_spec& spec, const boundary_condition& bc,
                         const solve_config& cfg, double psi_target) {
    const double eta = spec.eta;
    const double xm = cfg.x_start;
    const double Psi = psi_target;

    auto gamma = [&](double x) { return x <= xm ? std::pow(xm, -spec.delta) : std::pow(x, -spec.delta); };

    // The phase is locked against a slow estimate theta_bar of the Pruefer
    // angle, xi(x) = Psi - 2 theta_bar(x): the lock drives xi + 2 theta to
    // Psi while xi stays slowly varying (bounded variation), which the
    // exchange machinery needs. theta_bar tracks theta at the rate of the
    // resonant drive, k x^{-(p-2)delta}; k > 2 B keeps the decay branch
    // from slipping to the growth phase. For delta = 1/(p-2) this is k/x.
    const double k_track = std::max(8.0, 3.0 * std::abs(spec.lambda));
    const double drive_exp = (spec.p - 2) * spec.delta;

    // state: (theta, log r, theta_bar)
    auto rhs = [&](double x, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const double g = gamma(x);
        const double xi = Psi - 2 * y[2];
        const std::complex<double> osc = std::polar(1.0, eta * x + 2 * y[0]);
        const std::complex<double> w1 = spec.a * g * std::polar(1.0, -spec.phi * x + xi) * osc;
        const std::complex<double> w2 = spec.b * g * std::polar(1.0, -spec.psi * x) * osc;
        const std::complex<double> w3 = spec.c * g * std::polar(1.0, -spec.rho * x) * osc;
        const std::complex<double> w = w1 + w2 + w3;
        dy[0] = -w.imag();
        dy[1] = w.real();
        dy[2] = k_track * (y[0] - y[2]) * std::pow(std::max(x, xm), -drive_exp);
    };

    operator_data probe;  // only for the shared step cap
    probe.terms = {{spec.a, spec.phi, {}}, {spec.b, spec.psi, {}}, {spec.c, spec.rho, {}}};
    ode_options opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    {
        double fmax = 0;
        for (const auto& t : probe.terms) fmax = std::max(fmax, std::abs(t.phi));
        opt.max_step = cfg.max_step_fraction * 2 * pi / (fmax + std::abs(eta) + 1.0);
    }

    const int n = cfg.sample_count;
    std::vector<double> xs(static_cast<std::size_t>(n));
    {
        const double la = std::log(cfg.x_start), lb = std::log(cfg.x_max);
        for (int i = 0; i < n; ++i)
            xs[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
        xs.front() = cfg.x_start;
        xs.back() = cfg.x_max;
    }

    xi_build_result out;
    out.psi_target = Psi;
    out.trajectory.x = xs;
    out.trajectory.theta.resize(xs.size());
    out.trajectory.log_r.resize(xs.size());

    std::vector<double> tab_x, tab_xi;
    tab_x.reserve(1 << 16);
    tab_xi.reserve(1 << 16);
    dop853_stepper<3> stepper(opt);
    std::array<double, 3> y{bc.theta0, 0.0, bc.theta0};
    double x = cfg.x_start;
    out.trajectory.theta[0] = y[0];
    out.trajectory.log_r[0] = 0;
    tab_x.push_back(x);
    tab_xi.push_back(Psi - 2 * y[2]);

    double var = 0, xi_prev = Psi - 2 * y[2];
    double x_prev = x;
    double dxi_prev = -2 * k_track * (y[0] - y[2]) * std::pow(std::max(x, xm), -drive_exp);
    // cubic Hermite interior points keep the piecewise-linear table faithful
    // where the filtered phase still moves quickly
    auto obs = [&](double xx, const std::array<double, 3>& yy) {
        const double xi = Psi - 2 * yy[2];
        const double dxi = -2 * k_track * (yy[0] - yy[2]) * std::pow(std::max(xx, xm), -drive_exp);
        const double h = xx - x_prev;
        for (double t : {0.25, 0.5, 0.75}) {
            const double t2 = t * t, t3 = t2 * t;
            const double v = (2 * t3 - 3 * t2 + 1) * xi_prev + (t3 - 2 * t2 + t) * h * dxi_prev +
                             (-2 * t3 + 3 * t2) * xi + (t3 - t2) * h * dxi;
            tab_x.push_back(x_prev + t * h);
            tab_xi.push_back(v);
        }
        var += std::abs(xi - xi_prev);
        xi_prev = xi;
        dxi_prev = dxi;
        x_prev = xx;
        tab_x.push_back(xx);
        tab_xi.push_back(xi);
    };

    for (std::size_t i = 1; i < xs.size(); ++i) {
        stepper.advance(rhs, x, y, xs[i], obs);
        out.trajectory.theta[i] = y[0];
        out.trajectory.log_r[i] = y[1];
    }
    out.xi_variation = var;

    operator_data data;
    data.p = spec.p;
    data.finite = true;
    data.terms = {
        {spec.a, spec.phi,
         envelope::power_law_of(spec.delta, xm, phase_function::table_of(std::move(tab_x), std::move(tab_xi)))},
        {spec.b, spec.psi, envelope::power_law_of(spec.delta, xm)},
        {spec.c, spec.rho, envelope::power_law_of(spec.delta, xm)},
    };
    out.data = std::move(data);
    return out;
}

example_run run_example(const example_spec& spec, const solve_config& cfg, example_branch br) {
    example_run run;
    run.branch = br;
    run.predicted = predicted_decay(spec);
    if (run.predicted.degenerate)
        throw validation_error("run_example: Lambda is degenerate (B = 0)");

    run.build = build_xi(spec, boundary_condition{0.0}, cfg, branch_phase(spec, br));

    const auto& traj = run.build.trajectory;
    const double tau = 1.0 - (spec.p - 2) * spec.delta;  // 0 for the power form
    const bool power = run.predicted.form == decay_prediction::form_t::power;

    std::vector<double> z, y;
    const double lo = cfg.x_max / 10.0;  // final decade
    for (std::size_t i = 0; i < traj.x.size(); ++i) {
        if (traj.x[i] < lo) continue;
        z.push_back(power ? std::log(traj.x[i]) : std::pow(traj.x[i], tau));
        y.push_back(traj.log_r[i]);
    }
    if (z.size() < 50)
        throw std::invalid_argument("run_example: fewer than 50 samples in the fit window; raise sample_count");

    const line_fit f = fit_line(z, y);
    run.fitted_slope = f.slope;
    run.fitted_B = power ? std::abs(f.slope) : std::abs(f.slope) * tau;
    run.rel_err = std::abs(run.fitted_B - run.predicted.B) / run.predicted.B;
    return run;
}

} // namespace wvn

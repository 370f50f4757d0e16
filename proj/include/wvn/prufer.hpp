#ifndef WVN_PRUFER_HPP
#define WVN_PRUFER_HPP

// Numerical integration of the eigenequation, directly and in Pruefer form,
// with boundedness / subordinacy / Wronskian diagnostics. The eigenequation
// uses the convention eta = 2E; the Pruefer variables satisfy
//   theta' = -Im(e^{i(eta x + 2 theta)} phi(x)),
//   (log r)' = Re(e^{i(eta x + 2 theta)} phi(x)).

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "wvn/operator_data.hpp"

namespace wvn {

struct boundary_condition {
    double theta0 = 0;  // Pruefer angle at the left endpoint, in [-pi, pi)

    static boundary_condition from_theta0(double t);
    // omega = e^{iw} boundary parameter; theta0 = w - pi/4 (mod pi).
    static boundary_condition from_omega_angle(double w);
};

struct solve_config {
    double x_start = 1.0;  // matches the envelope clamp point
    double x_max = 1000.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    // max step <= fraction * 2*pi / (max_j |phi_j| + |eta| + 1)
    double max_step_fraction = 0.1;
    int sample_count = 600;  // log-spaced output grid
};

struct prufer_trajectory {
    std::vector<double> x;
    std::vector<double> theta;   // continuous (unwrapped)
    std::vector<double> log_r;   // log_r(x_start) = 0
};

struct vector_trajectory {
    std::vector<double> x;
    std::vector<std::complex<double>> u1, u2;
};

prufer_trajectory integrate_prufer(const operator_data& data, double eta,
                                   const boundary_condition& bc, const solve_config& cfg);

// Solution U of the eigenequation with E = eta/2:
//   u1' = -i (E u1 - phi(x) u2),  u2' = i (E u2 - conj(phi(x)) u1).
vector_trajectory integrate_direct(const operator_data& data, double eta,
                                   std::complex<double> u1_0, std::complex<double> u2_0,
                                   const solve_config& cfg);

// Initial vector matching a Pruefer boundary condition with r = r0:
// U = r0 ((1+i) e^{-i(eta/2 x + theta0)}, (1-i) e^{i(eta/2 x + theta0)}).
std::pair<std::complex<double>, std::complex<double>>
initial_vector(double eta, const boundary_condition& bc, double x_start, double r0 = 1.0);

// r = |u1|/sqrt(2), theta = -arg(u1/(1+i)) - (eta/2) x unwrapped along the
// grid, log_r rebased to 0 at the first sample.
prufer_trajectory prufer_from_vector(const vector_trajectory& traj, double eta);

struct wronskian_series {
    std::vector<double> x;
    std::vector<std::complex<double>> w;  // W = i (u1_a u2_b - u2_a u1_b)
    double max_rel_drift = 0;             // max |W - W(x_start)| / |W(x_start)|
};

wronskian_series wronskian(const vector_trajectory& a, const vector_trajectory& b);

// Cumulative trapezoid ratio of ||U_a||^2 over ||U_b||^2 integrals on the
// common grid; the first entry is the pointwise norm ratio.
std::vector<double> subordinacy_ratio(const vector_trajectory& a, const vector_trajectory& b);

enum class boundedness_verdict { bounded, power_decay, power_growth, indeterminate };

struct boundedness_report {
    std::vector<double> window_sup;          // sup of log_r per dyadic window
    double slope_vs_x = 0;                   // kappa = 1 regressor
    std::optional<double> slope_vs_x_kappa;  // kappa = 1 - d when d supplied
    double slope_vs_log = 0;                 // kappa = 0 regressor (log x)
    double r2_vs_log = 0;
    double fitted_B = 0;                     // -slope_vs_log
    boundedness_verdict verdict = boundedness_verdict::indeterminate;
};

// d = delta*(p-2) from the data, when known.
boundedness_report boundedness_diagnostic(const prufer_trajectory& traj,
                                          std::optional<double> d = std::nullopt);

const char* to_string(boundedness_verdict v);

// Least-squares slope, intercept and R^2 of y against z.
struct line_fit {
    double slope = 0, intercept = 0, r2 = 0;
};
line_fit fit_line(const std::vector<double>& z, const std::vector<double>& y);

} // namespace wvn

#endif

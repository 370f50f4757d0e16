#ifndef WVN_EIGEN_CONSTRUCT_HPP
#define WVN_EIGEN_CONSTRUCT_HPP

// The explicit embedded-eigenvalue construction: three-term data with
// rationally independent frequencies, coefficient conditions that kill the
// non-oscillatory part of theta', a phase chosen by locking the resonant
// combination, and the predicted decay |Lambda| of the eigenfunction.

#include <complex>
#include <span>
#include <utility>

#include "wvn/operator_data.hpp"
#include "wvn/prufer.hpp"

namespace wvn {

struct example_spec {
    double phi = 0, psi = 0, rho = 0;  // psi < rho < phi, 2 rho - phi - psi = 1
    std::complex<double> a, b, c;
    double delta = 1.0 / 3.0;          // in (1/p, 1/(p-2)]
    int p = 5;
    double eta = 0;                    // phi + psi - rho
    double energy = 0;                 // eta / 2
    std::complex<double> lambda;       // resonant coefficient
    double target_phase = 0;           // Psi with Re(Lambda e^{i Psi}) = -|Lambda|
};

// Solves |c|^2 = a_mod^2/(psi-rho) + b_mod^2/(phi-rho) for the third
// amplitude; phases default to zero. Throws validation_error when
// 2 rho - phi - psi != 1 or the solved |c|^2 is not positive.
example_spec solve_coefficients(double phi, double psi, double rho,
                                double a_mod, double b_mod, double delta = 1.0 / 3.0);

// Residuals of the two explicit three-term conditions, evaluated verbatim.
std::pair<double, double> verify_conditions(const example_spec& spec, double eta);

// General M-term forms of the two conditions.
double second_order_residual(std::span<const std::complex<double>> c,
                             std::span<const double> freqs, double eta);
double fourth_order_residual(std::span<const std::complex<double>> c,
                             std::span<const double> freqs, double eta);

// Lambda = C f_{3,1}(eta; [phi, psi]; [rho]) a b conj(c), C = 2!1! = 2.
// Requires distinct frequencies.
std::complex<double> compute_lambda(const example_spec& spec);

// Closed form of f_{4,0} on the diagonal signature ([p1,p2]; [p1,p2]).
std::complex<double> f40_closed(double eta, double phi1, double phi2);

// x^{-2 delta} and x^{-4 delta} coefficients of the non-oscillatory part of
// theta'; both vanish for a valid spec.
std::pair<std::complex<double>, std::complex<double>>
compute_omega(const example_spec& spec, double eta);

struct decay_prediction {
    double B = 0;  // |Lambda|
    enum class form_t { power, stretched_exponential } form = form_t::power;
    bool degenerate = false;  // Lambda == 0
};

decay_prediction predicted_decay(const example_spec& spec);

struct xi_build_result {
    operator_data data;           // frozen phase table on the first term
    prufer_trajectory trajectory; // the phase-locked run
    double xi_variation = 0;      // Var(xi) over [x_start, x_max]
    double psi_target = 0;        // the locked value of xi + 2 theta
};

// Co-integrates theta with xi(x) = Psi - 2 theta(x) assigned to the first
// term's envelope phase, so the resonant combination holds at Psi exactly.
xi_build_result build_xi(const example_spec& spec, const boundary_condition& bc,
                         const solve_config& cfg, double psi_target);

enum class example_branch { decay, growth };

double branch_phase(const example_spec& spec, example_branch br);

struct example_run {
    xi_build_result build;
    example_branch branch = example_branch::decay;
    double fitted_slope = 0;  // slope of log r against the fit regressor
    double fitted_B = 0;      // |slope| scaled to the B of the predicted form
    double rel_err = 0;       // |fitted_B - predicted B| / predicted B
    decay_prediction predicted;
};

// Locked run plus a least-squares fit of log r over the final decade
// (log x regressor for the power form, x^{1-(p-2)delta} for the stretched
// form).
example_run run_example(const example_spec& spec, const solve_config& cfg, example_branch br);

} // namespace wvn

#endif

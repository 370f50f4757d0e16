#ifndef WVN_OPERATOR_DATA_HPP
#define WVN_OPERATOR_DATA_HPP

// Operator data phi(x) = sum_j c_j e^{-i phi_j x} gamma_j(x): envelopes,
// terms, evaluation, validation and closed-form L^p norms. All types are
// immutable by convention after construction and every operation is pure.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wvn {

// Envelope phase xi(x), contributing e^{+i xi(x)} to gamma.
struct phase_function {
    enum class kind_t { none, table, linear, analytic };
    kind_t kind = kind_t::none;
    std::vector<double> x, xi;            // table nodes, x ascending
    double slope = 0, intercept = 0;      // linear: xi(x) = slope*x + intercept
    std::function<double(double)> fn;     // analytic handle (not serializable)

    double operator()(double x_at) const;

    static phase_function none() { return {}; }
    static phase_function linear(double slope, double intercept = 0);
    static phase_function table_of(std::vector<double> x, std::vector<double> xi);
    static phase_function analytic(std::function<double(double)> f);
};

enum class envelope_kind { power_law, constant, sampled };

struct envelope {
    envelope_kind kind = envelope_kind::power_law;
    double delta = 1.0;   // power-law exponent, > 0
    double x_min = 1.0;   // clamp point: |gamma| = x_min^-delta on (0, x_min]
    phase_function phase;
    double declared_variation = 0;        // tau_j; 0 means "derive if possible"
    std::map<int, double> declared_lp;    // p -> integral of |gamma|^p
    std::vector<double> sample_x, sample_value;  // sampled kind, x ascending

    // |gamma(x)|: clamped power law, 1 for constant, interpolated table for
    // sampled (nearest endpoint outside the range).
    double modulus(double x) const;
    std::complex<double> value(double x) const;  // modulus * e^{i xi}
    double variation() const;                    // declared, or x_min^-delta for power law

    static envelope power_law_of(double delta, double x_min = 1.0, phase_function ph = {});
    static envelope constant_of(std::map<int, double> declared_lp = {},
                                double declared_variation = 0, phase_function ph = {});
    static envelope sampled_of(std::vector<double> x, std::vector<double> value,
                               double declared_variation, std::map<int, double> declared_lp,
                               phase_function ph = {});
};

struct wvn_term {
    std::complex<double> c;
    double phi = 0;
    envelope env;
};

struct operator_data {
    std::vector<wvn_term> terms;
    int p = 3;                     // odd, >= 3
    std::optional<double> alpha;   // in (0, 1/(p-2)) when present
    bool finite = true;            // false: the list truncates an infinite sum

    std::vector<double> frequencies() const;
};

// phi(x) = sum_j c_j e^{-i phi_j x} gamma_j(x). Throws std::domain_error for
// x <= 0.
std::complex<double> evaluate_phi(const operator_data& data, double x);

struct validation_report {
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    std::optional<double> alpha_partial_sum;  // sum |c_j|^alpha over listed terms
    std::optional<double> abs_partial_sum;    // sum |c_j| over listed terms
    bool ok() const { return violations.empty(); }
};

validation_report validate(const operator_data& data);

// Closed-form integral of |gamma|^p for the clamped power law,
// x_min^{1-delta p} (1 + 1/(delta p - 1)); declared value for the other
// kinds. Throws validation_error when the power-law integral diverges
// (delta*p <= 1) or a declared value is missing.
double envelope_lp(const envelope& env, int p);

} // namespace wvn

#endif

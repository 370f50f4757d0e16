#include "wvn/operator_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wvn/errors.hpp"

namespace wvn {

namespace {

// Linear interpolation on an ascending table; nearest endpoint outside.
double interp_table(const std::vector<double>& xs, const std::vector<double>& vs, double x) {
    if (xs.empty()) return 0;
    if (x <= xs.front()) return vs.front();
    if (x >= xs.back()) return vs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[i - 1], x1 = xs[i];
    const double t = (x - x0) / (x1 - x0);
    return vs[i - 1] + t * (vs[i] - vs[i - 1]);
}

} // namespace

double phase_function::operator()(double x_at) const {
    switch (kind) {
        case kind_t::none: return 0;
        case kind_t::linear: return slope * x_at + intercept;
        case kind_t::table: return interp_table(x, xi, x_at);
        case kind_t::analytic: return fn ? fn(x_at) : 0;
    }
    return 0;
}

phase_function phase_function::linear(double slope, double intercept) {
    phase_function p;
    p.kind = kind_t::linear;
    p.slope = slope;
    p.intercept = intercept;
    return p;
}

phase_function phase_function::table_of(std::vector<double> x, std::vector<double> xi) {
    if (x.size() != xi.size() || x.empty())
        throw std::invalid_argument("phase table: need equal, nonempty node arrays");
    if (!std::is_sorted(x.begin(), x.end()))
        throw std::invalid_argument("phase table: x nodes must be ascending");
    phase_function p;
    p.kind = kind_t::table;
    p.x = std::move(x);
    p.xi = std::move(xi);
    return p;
}

phase_function phase_function::analytic(std::function<double(double)> f) {
    phase_function p;
    p.kind = kind_t::analytic;
    p.fn = std::move(f);
    return p;
}

double envelope::modulus(double x) const {
    switch (kind) {
        case envelope_kind::power_law:
            return x <= x_min ? std::pow(x_min, -delta) : std::pow(x, -delta);
        case envelope_kind::constant:
            return 1.0;
        case envelope_kind::sampled:
            return interp_table(sample_x, sample_value, x);
    }
    return 0;
}

std::complex<double> envelope::value(double x) const {
    const double m = modulus(x);
    if (phase.kind == phase_function::kind_t::none) return {m, 0};
    return std::polar(m, phase(x));
}

double envelope::variation() const {
    if (declared_variation > 0) return declared_variation;
    if (kind == envelope_kind::power_law) return std::pow(x_min, -delta);
    return declared_variation;
}

envelope envelope::power_law_of(double delta, double x_min, phase_function ph) {
    envelope e;
    e.kind = envelope_kind::power_law;
    e.delta = delta;
    e.x_min = x_min;
    e.phase = std::move(ph);
    return e;
}

envelope envelope::constant_of(std::map<int, double> declared_lp, double declared_variation,
                               phase_function ph) {
    envelope e;
    e.kind = envelope_kind::constant;
    e.declared_lp = std::move(declared_lp);
    e.declared_variation = declared_variation;
    e.phase = std::move(ph);
    return e;
}

envelope envelope::sampled_of(std::vector<double> x, std::vector<double> value,
                              double declared_variation, std::map<int, double> declared_lp,
                              phase_function ph) {
    if (x.size() != value.size() || x.empty())
        throw std::invalid_argument("sampled envelope: need equal, nonempty sample arrays");
    if (!std::is_sorted(x.begin(), x.end()))
        throw std::invalid_argument("sampled envelope: sample x must be ascending");
    envelope e;
    e.kind = envelope_kind::sampled;
    e.sample_x = std::move(x);
    e.sample_value = std::move(value);
    e.declared_variation = declared_variation;
    e.declared_lp = std::move(declared_lp);
    e.phase = std::move(ph);
    return e;
}

std::vector<double> operator_data::frequencies() const {
    std::vector<double> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(t.phi);
    return out;
}

std::complex<double> evaluate_phi(const operator_data& data, double x) {
    if (!(x > 0)) throw std::domain_error("evaluate_phi: x must be positive");
    std::complex<double> acc{0, 0};
    for (const auto& t : data.terms)
        acc += t.c * std::polar(1.0, -t.phi * x) * t.env.value(x);
    return acc;
}

validation_report validate(const operator_data& data) {
    validation_report rep;
    auto bad = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (data.p < 3 || data.p % 2 == 0) bad("p must be odd and >= 3");
    if (data.alpha) {
        const double a = *data.alpha;
        if (data.p >= 3 && !(a > 0 && a < 1.0 / (data.p - 2)))
            bad("alpha must lie in (0, 1/(p-2))");
    }

    bool any_power_law = false;
    for (std::size_t j = 0; j < data.terms.size(); ++j) {
        const auto& t = data.terms[j];
        const std::string tag = "term " + std::to_string(j) + ": ";
        if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag())) bad(tag + "c must be finite");
        if (!std::isfinite(t.phi)) bad(tag + "phi must be finite");
        switch (t.env.kind) {
            case envelope_kind::power_law:
                any_power_law = true;
                if (!(t.env.delta > 0)) bad(tag + "power-law delta must be positive");
                if (!(t.env.x_min > 0)) bad(tag + "power-law x_min must be positive");
                if (data.p >= 3 && t.env.delta * data.p <= 1)
                    bad(tag + "power-law L^p integral diverges (delta*p <= 1)");
                break;
            case envelope_kind::constant:
            case envelope_kind::sampled:
                if (!t.env.declared_lp.count(data.p))
                    bad(tag + "missing declared_lp for p=" + std::to_string(data.p));
                if (t.env.kind == envelope_kind::sampled &&
                    (t.env.sample_x.size() != t.env.sample_value.size() || t.env.sample_x.empty()))
                    bad(tag + "sampled envelope needs matching nonempty sample arrays");
                break;
        }
    }

    double abs_sum = 0;
    for (const auto& t : data.terms) abs_sum += std::abs(t.c);
    rep.abs_partial_sum = abs_sum;
    if (!data.finite && data.alpha) {
        double s = 0;
        for (const auto& t : data.terms) s += std::pow(std::abs(t.c), *data.alpha);
        rep.alpha_partial_sum = s;
        rep.notes.push_back("alpha-decay partial sum over the listed truncation is a certificate, not a convergence proof");
        rep.notes.push_back("sum |c_j| over the truncation reported; for alpha < 1 the alpha-sum dominates it eventually");
    }
    if (any_power_law)
        rep.notes.push_back("power-law envelopes are clamped to x_min^-delta on (0, x_min]");
    return rep;
}

double envelope_lp(const envelope& env, int p) {
    if (p < 1) throw std::invalid_argument("envelope_lp: p must be positive");
    if (env.kind == envelope_kind::power_law) {
        const double dp = env.delta * p;
        if (dp <= 1)
            throw validation_error("envelope_lp: power-law integral diverges (delta*p <= 1)");
        // cutoff part x_min * x_min^{-dp} plus tail x_min^{1-dp} / (dp - 1)
        return std::pow(env.x_min, 1.0 - dp) * (1.0 + 1.0 / (dp - 1.0));
    }
    const auto it = env.declared_lp.find(p);
    if (it == env.declared_lp.end())
        throw validation_error("envelope_lp: no declared L^p value for p=" + std::to_string(p));
    return it->second;
}

} // namespace wvn

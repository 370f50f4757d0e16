#ifndef WVN_INFINITE_TYPE_HPP
#define WVN_INFINITE_TYPE_HPP

// Truncated small-divisor sums over h_I, the error functionals E_{I,K},
// Catalan combinatorics and the Hausdorff-dimension bound. The tuple
// enumerations are the hot kernels: OpenMP-parallel with fixed-block partial
// sums combined in index order, so results are identical for any thread
// count; serial references are kept for testing and benchmarking.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <vector>

#include "wvn/operator_data.hpp"

namespace wvn {

// Declared dominating envelope for the omitted coefficients plus a declared
// lower bound on every omitted denominator; without it no tail certificate
// is emitted.
struct tail_declaration {
    enum class kind_t { geometric, power } kind = kind_t::geometric;
    double amplitude = 1;    // A in |c_j| <= A r^j or A j^-q (j one-based)
    double ratio = 0.5;      // r (geometric, in (0,1)) or q (power, > 1)
    double denom_lower = 0;  // lower bound on |denominators| over omitted tuples
};

enum class divisor_verdict { convergent_evidence, divergent_evidence, pole_hit };

struct divisor_sum_report {
    double eta = 0;
    int I = 1;
    std::size_t j_trunc = 0;
    double partial = 0;       // sum over tuples from the first j_trunc terms
    double partial_half = 0;  // same sum truncated at floor(j_trunc/2)
    std::size_t pole_count = 0;
    std::optional<double> tail_certificate;
    divisor_verdict verdict = divisor_verdict::divergent_evidence;
};

// Condition-(4) partial sum: sum over (k_1..k_P, l_1..l_{P-1}) in
// [0, J)^{2P-1} of |h_I(eta; ...) prod c_k prod conj(c_l)|, P = (I+1)/2.
// Guarded tuples are excluded and counted.
divisor_sum_report small_divisor_sum(const operator_data& data, double eta, int I,
                                     std::size_t j_trunc,
                                     const std::optional<tail_declaration>& tail = {},
                                     std::size_t cap = 10'000'000, double pole_tol = 1e-12);
divisor_sum_report small_divisor_sum_serial(const operator_data& data, double eta, int I,
                                            std::size_t j_trunc,
                                            const std::optional<tail_declaration>& tail = {},
                                            std::size_t cap = 10'000'000, double pole_tol = 1e-12);

struct e_ik_result {
    double value = 0;
    bool via_reduction = false;  // E_{I,K} <= sum_i E_{i,1} E_{I-i,K-1} fallback
};

// E_{I,K} = 2 sum |g_{I,K} prod c|, truncated to the first j_trunc terms.
e_ik_result e_ik(const operator_data& data, double eta, int I, int K, std::size_t j_trunc,
                 std::size_t cap = 10'000'000, double pole_tol = 1e-12);

// Exact Catalan numbers; the closed form binom(2n,n)/(n+1) and the
// convolution recursion C_n = sum C_j C_{n-1-j}.
boost::multiprecision::cpp_int catalan(unsigned n);
boost::multiprecision::cpp_int catalan_convolution(unsigned n);

// (p-2) * alpha, rounded decimal-faithfully (15 significant digits) so that
// e.g. p=5, alpha=0.2 yields exactly 0.6.
double hausdorff_bound(int p, double alpha);

struct eta_profile_entry {
    double eta = 0;
    double max_partial = 0;
    std::size_t pole_count = 0;
    bool near_frequency = false;  // within 1e-9 of a listed phi_j
    std::vector<divisor_sum_report> per_i;  // odd I = 1, 3, ..., p-2
};

std::vector<eta_profile_entry> exceptional_profile(const operator_data& data, int p,
                                                   const std::vector<double>& eta_grid,
                                                   std::size_t j_trunc,
                                                   std::size_t cap = 10'000'000);
std::vector<eta_profile_entry> exceptional_profile_serial(const operator_data& data, int p,
                                                          const std::vector<double>& eta_grid,
                                                          std::size_t j_trunc,
                                                          std::size_t cap = 10'000'000);

} // namespace wvn

#endif

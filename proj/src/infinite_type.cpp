#include "wvn/infinite_type.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "wvn/errors.hpp"
#include "wvn/recursion.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wvn {

namespace {

constexpr std::size_t kBlock = 4096;

double checked_pow_count(std::size_t base, int exp, std::size_t cap) {
    double t = 1;
    for (int i = 0; i < exp; ++i) t *= static_cast<double>(base);
    if (t > static_cast<double>(cap))
        throw cap_exceeded_error("tuple enumeration exceeds the cap (" + std::to_string(cap) + ")");
    return t;
}

// Sum of |h_I * prod c| over the linearized tuple space. The last negative
// frequency enters only the prefactor denominator of the h recursion, so the
// m-sum numerator is evaluated once per (2P-2)-digit prefix and the final
// digit is pure arithmetic. Prefix blocks are combined in index order, which
// matches per-tuple evaluation bit for bit and is independent of the
// schedule and thread count.
struct divisor_kernel {
    const operator_data& data;
    double eta;
    int P;
    std::size_t J;
    double pole_tol;

    struct block_out {
        double sum = 0;
        double sum_half = 0;
        std::size_t poles = 0;
    };

    // I == 1: no prefix structure, h_1 = 1/(phi_k - eta)
    block_out run_block_order_one(std::size_t begin, std::size_t end, std::size_t half) const {
        block_out out;
        for (std::size_t k = begin; k < end; ++k) {
            const auto& t = data.terms[k];
            const double d = t.phi - eta;
            const double scale = 1.0 + std::abs(t.phi) + std::abs(eta);
            if (std::abs(d) < pole_tol * scale) {
                ++out.poles;
                continue;
            }
            const double term = std::abs(t.c) / std::abs(d);
            out.sum += term;
            if (k < half) out.sum_half += term;
        }
        return out;
    }

    // blocks index prefixes (the first 2P-2 digits); each covers J tuples
    block_out run_block(recursion_engine& eng, std::size_t begin, std::size_t end,
                        std::size_t half) const {
        block_out out;
        const int width = 2 * P - 2;
        const int I = 2 * P - 1;
        std::vector<std::size_t> digit(static_cast<std::size_t>(width));
        std::vector<double> pos(static_cast<std::size_t>(P)),
            negp(static_cast<std::size_t>(P - 2));
        for (std::size_t idx = begin; idx < end; ++idx) {
            std::size_t v = idx;
            bool prefix_in_half = true;
            for (int d = width - 1; d >= 0; --d) {
                digit[static_cast<std::size_t>(d)] = v % J;
                if (digit[static_cast<std::size_t>(d)] >= half) prefix_in_half = false;
                v /= J;
            }
            double amp = 1, sum_pos = 0, sum_negp = 0;
            for (int j = 0; j < P; ++j) {
                const auto& t = data.terms[digit[static_cast<std::size_t>(j)]];
                pos[static_cast<std::size_t>(j)] = t.phi;
                sum_pos += t.phi;
                amp *= std::abs(t.c);
            }
            for (int j = 0; j < P - 2; ++j) {
                const auto& t = data.terms[digit[static_cast<std::size_t>(P + j)]];
                negp[static_cast<std::size_t>(j)] = t.phi;
                sum_negp += t.phi;
                amp *= std::abs(t.c);
            }

            // numerator of the h recursion over the prefix
            std::complex<double> num{0, 0};
            bool num_pole = false;
            for (int m = 1; m <= I - 2 && !num_pole; m += 2) {
                const std::size_t q = static_cast<std::size_t>((m + 1) / 2);
                const std::vector<double> lp(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(q));
                const std::vector<double> ln(negp.begin(),
                                             negp.begin() + static_cast<std::ptrdiff_t>(q - 1));
                const std::vector<double> rp(pos.begin() + static_cast<std::ptrdiff_t>(q), pos.end());
                const std::vector<double> rn(negp.begin() + static_cast<std::ptrdiff_t>(q - 1),
                                             negp.end());
                const auto hl = eng.h(eta, lp, ln);
                const auto hr = eng.h(eta, rp, rn);
                if (hl.pole || hr.pole) num_pole = true;
                else num += hl.value * hr.value;
            }
            if (num_pole) {
                out.poles += J;
                continue;
            }
            const double num_abs = std::abs(num);

            for (std::size_t last = 0; last < J; ++last) {
                const auto& t = data.terms[last];
                const double sn = sum_negp + t.phi;
                const double d = sum_pos - sn - eta;
                const double scale = 1.0 + std::abs(sum_pos) + std::abs(sn) + std::abs(eta);
                if (std::abs(d) < pole_tol * scale) {
                    ++out.poles;
                    continue;
                }
                const double term = num_abs / std::abs(d) * amp * std::abs(t.c);
                out.sum += term;
                if (prefix_in_half && last < half) out.sum_half += term;
            }
        }
        return out;
    }
};

divisor_sum_report divisor_sum_impl(const operator_data& data, double eta, int I,
                                    std::size_t j_trunc, const std::optional<tail_declaration>& tail,
                                    std::size_t cap, double pole_tol, bool parallel) {
    if (I < 1 || I % 2 == 0) throw std::invalid_argument("small_divisor_sum: I must be odd and >= 1");
    if (data.p >= 3 && I > data.p - 2)
        throw std::invalid_argument("small_divisor_sum: I must not exceed p-2");
    if (j_trunc > data.terms.size())
        throw std::invalid_argument("small_divisor_sum: j_trunc exceeds the number of listed terms");

    divisor_sum_report rep;
    rep.eta = eta;
    rep.I = I;
    rep.j_trunc = j_trunc;

    const int P = (I + 1) / 2;
    if (j_trunc == 0) {
        rep.verdict = divisor_verdict::convergent_evidence;
        return rep;
    }
    (void)checked_pow_count(j_trunc, 2 * P - 1, cap);
    const std::size_t half = j_trunc / 2;

    const divisor_kernel kern{data, eta, P, j_trunc, pole_tol};
    // units are prefixes for I >= 3 (J tuples each), whole tuples for I = 1;
    // the block partition depends only on (I, J), never on the thread count
    const bool order_one = I == 1;
    std::size_t units = 1;
    if (order_one) {
        units = j_trunc;
    } else {
        for (int i = 0; i < 2 * P - 2; ++i) units *= j_trunc;
    }
    const std::size_t block = order_one ? kBlock : std::max<std::size_t>(1, kBlock / j_trunc);
    const std::size_t nblocks = (units + block - 1) / block;
    std::vector<divisor_kernel::block_out> partials(nblocks);

#ifdef _OPENMP
#pragma omp parallel if (parallel)
    {
        recursion_engine eng(pole_tol);
#pragma omp for schedule(dynamic)
        for (long b = 0; b < static_cast<long>(nblocks); ++b) {
            const std::size_t begin = static_cast<std::size_t>(b) * block;
            const std::size_t end = std::min(begin + block, units);
            partials[static_cast<std::size_t>(b)] =
                order_one ? kern.run_block_order_one(begin, end, half)
                          : kern.run_block(eng, begin, end, half);
        }
    }
#else
    (void)parallel;
    {
        recursion_engine eng(pole_tol);
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t begin = b * block;
            const std::size_t end = std::min(begin + block, units);
            partials[b] = order_one ? kern.run_block_order_one(begin, end, half)
                                    : kern.run_block(eng, begin, end, half);
        }
    }
#endif

    for (const auto& p : partials) {
        rep.partial += p.sum;
        rep.partial_half += p.sum_half;
        rep.pole_count += p.poles;
    }

    if (tail && tail->denom_lower > 0) {
        double s_j = 0;
        for (std::size_t j = 0; j < j_trunc; ++j) s_j += std::abs(data.terms[j].c);
        double t = 0;
        if (tail->kind == tail_declaration::kind_t::geometric) {
            const double r = tail->ratio;
            if (!(r > 0 && r < 1))
                throw std::invalid_argument("tail certificate: geometric ratio must lie in (0,1)");
            t = tail->amplitude * std::pow(r, static_cast<double>(j_trunc) + 1) / (1 - r);
        } else {
            const double q = tail->ratio;
            if (!(q > 1)) throw std::invalid_argument("tail certificate: power exponent must exceed 1");
            t = tail->amplitude * std::pow(static_cast<double>(j_trunc), 1 - q) / (q - 1);
        }
        const double cat = static_cast<double>(catalan(static_cast<unsigned>(P - 1)));
        const double width = static_cast<double>(2 * P - 1);
        const double cert = cat *
                            (std::pow(s_j + t, width) - std::pow(s_j, width)) /
                            std::pow(tail->denom_lower, static_cast<double>(I));
        rep.tail_certificate = cert;
    }

    if (rep.pole_count > 0)
        rep.verdict = divisor_verdict::pole_hit;
    else if (rep.tail_certificate)
        rep.verdict = divisor_verdict::convergent_evidence;
    else if (rep.partial - rep.partial_half <= 0.01 * rep.partial)
        rep.verdict = divisor_verdict::convergent_evidence;
    else
        rep.verdict = divisor_verdict::divergent_evidence;
    return rep;
}

} // namespace

divisor_sum_report small_divisor_sum(const operator_data& data, double eta, int I,
                                     std::size_t j_trunc, const std::optional<tail_declaration>& tail,
                                     std::size_t cap, double pole_tol) {
    return divisor_sum_impl(data, eta, I, j_trunc, tail, cap, pole_tol, true);
}

divisor_sum_report small_divisor_sum_serial(const operator_data& data, double eta, int I,
                                            std::size_t j_trunc,
                                            const std::optional<tail_declaration>& tail,
                                            std::size_t cap, double pole_tol) {
    return divisor_sum_impl(data, eta, I, j_trunc, tail, cap, pole_tol, false);
}

namespace {

double e_ik_direct(const operator_data& data, double eta, int I, int K, std::size_t j_trunc,
                   std::size_t cap, double pole_tol) {
    const int P = (I + K) / 2, N = (I - K) / 2;
    const int width = P + N;
    if (j_trunc == 0) return 0;
    const double total_d = checked_pow_count(j_trunc, width, cap);
    const std::size_t total = static_cast<std::size_t>(total_d);
    const std::size_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<double> partials(nblocks, 0.0);

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        recursion_engine eng(pole_tol);
        std::vector<std::size_t> digit(static_cast<std::size_t>(width));
        std::vector<double> pos(static_cast<std::size_t>(P)), neg(static_cast<std::size_t>(N));
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
        for (long b = 0; b < static_cast<long>(nblocks); ++b) {
            const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
            const std::size_t end = std::min(begin + kBlock, total);
            double s = 0;
            for (std::size_t idx = begin; idx < end; ++idx) {
                std::size_t v = idx;
                for (int d = width - 1; d >= 0; --d) {
                    digit[static_cast<std::size_t>(d)] = v % j_trunc;
                    v /= j_trunc;
                }
                double amp = 1;
                for (int j = 0; j < P; ++j) {
                    const auto& t = data.terms[digit[static_cast<std::size_t>(j)]];
                    pos[static_cast<std::size_t>(j)] = t.phi;
                    amp *= std::abs(t.c);
                }
                for (int j = 0; j < N; ++j) {
                    const auto& t = data.terms[digit[static_cast<std::size_t>(P + j)]];
                    neg[static_cast<std::size_t>(j)] = t.phi;
                    amp *= std::abs(t.c);
                }
                const auto gv = eng.g(eta, pos, neg);
                if (gv.pole) continue;  // guarded tuples carry no weight here
                s += std::abs(gv.value) * amp;
            }
            partials[static_cast<std::size_t>(b)] = s;
        }
    }
    double sum = 0;
    for (double p : partials) sum += p;
    return 2 * sum;
}

} // namespace

e_ik_result e_ik(const operator_data& data, double eta, int I, int K, std::size_t j_trunc,
                 std::size_t cap, double pole_tol) {
    if (K == 0) return {0.0, false};  // g_{I,0} == 0
    if (!(1 <= K && K <= I)) throw std::invalid_argument("e_ik: need 0 <= K <= I");
    if ((I - K) % 2 != 0) return {0.0, false};  // g vanishes off parity
    if (j_trunc > data.terms.size())
        throw std::invalid_argument("e_ik: j_trunc exceeds the number of listed terms");

    double combos = 1;
    bool fits = true;
    for (int i = 0; i < I; ++i) {
        combos *= static_cast<double>(j_trunc);
        if (combos > static_cast<double>(cap)) { fits = false; break; }
    }
    if (fits) return {e_ik_direct(data, eta, I, K, j_trunc, cap, pole_tol), false};

    if (K < 2)
        throw cap_exceeded_error("e_ik: enumeration exceeds the cap and K = 1 has no reduction path");
    // E_{I,K} <= sum_i E_{i,1} E_{I-i,K-1}
    double bound = 0;
    for (int i = 1; i < I; ++i) {
        if ((i - 1) % 2 != 0) continue;
        const auto left = e_ik(data, eta, i, 1, j_trunc, cap, pole_tol);
        const auto right = e_ik(data, eta, I - i, K - 1, j_trunc, cap, pole_tol);
        bound += left.value * right.value;
    }
    return {bound, true};
}

boost::multiprecision::cpp_int catalan(unsigned n) {
    boost::multiprecision::cpp_int c = 1;
    for (unsigned i = 0; i < n; ++i) {
        c *= 2 * (2 * i + 1);
        c /= i + 2;  // exact: (i+2) C_{i+1} = 2(2i+1) C_i
    }
    return c;
}

boost::multiprecision::cpp_int catalan_convolution(unsigned n) {
    std::vector<boost::multiprecision::cpp_int> c(n + 1);
    c[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        boost::multiprecision::cpp_int s = 0;
        for (unsigned j = 0; j < m; ++j) s += c[j] * c[m - 1 - j];
        c[m] = s;
    }
    return c[n];
}

double hausdorff_bound(int p, double alpha) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("hausdorff_bound: p must be odd and >= 3");
    if (!(alpha > 0 && alpha < 1.0 / (p - 2)))
        throw std::invalid_argument("hausdorff_bound: alpha must lie in (0, 1/(p-2))");
    const double raw = (p - 2) * alpha;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", raw);
    return std::strtod(buf, nullptr);
}

namespace {

std::vector<eta_profile_entry> profile_impl(const operator_data& data, int p,
                                            const std::vector<double>& eta_grid,
                                            std::size_t j_trunc, std::size_t cap, bool parallel) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("exceptional_profile: p must be odd and >= 3");
    std::vector<eta_profile_entry> out(eta_grid.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long gi = 0; gi < static_cast<long>(eta_grid.size()); ++gi) {
        const double eta = eta_grid[static_cast<std::size_t>(gi)];
        eta_profile_entry e;
        e.eta = eta;
        for (const auto& t : data.terms)
            if (std::abs(t.phi - eta) < 1e-9) e.near_frequency = true;
        for (int I = 1; I <= p - 2; I += 2) {
            // nested kernels stay serial inside the per-eta loop
            auto rep = small_divisor_sum_serial(data, eta, I, j_trunc, {}, cap);
            e.max_partial = std::max(e.max_partial, rep.partial);
            e.pole_count += rep.pole_count;
            e.per_i.push_back(std::move(rep));
        }
        out[static_cast<std::size_t>(gi)] = std::move(e);
    }
    return out;
}

} // namespace

std::vector<eta_profile_entry> exceptional_profile(const operator_data& data, int p,
                                                   const std::vector<double>& eta_grid,
                                                   std::size_t j_trunc, std::size_t cap) {
    return profile_impl(data, p, eta_grid, j_trunc, cap, true);
}

std::vector<eta_profile_entry> exceptional_profile_serial(const operator_data& data, int p,
                                                          const std::vector<double>& eta_grid,
                                                          std::size_t j_trunc, std::size_t cap) {
    return profile_impl(data, p, eta_grid, j_trunc, cap, false);
}

} // namespace wvn

#include "wvn/identity_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wvn/extended.hpp"
#include "wvn/infinite_type.hpp"
#include "wvn/recursion.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wvn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d4a68c2b9f5c67ull;
    return x ^ (x >> 31);
}

struct trial_rng {
    std::mt19937_64 gen;
    explicit trial_rng(std::uint64_t s) : gen(s) {}
    double freq() { return std::uniform_real_distribution<double>(1.0, 10.0)(gen); }
    double eta() { return std::uniform_real_distribution<double>(-5.0, 5.0)(gen); }
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

template <class R>
struct trial_results {
    double red_f = 0, red_g = 0, imag = 0, swap_v = 0, gh = 0, dyck = 0;
    int resampled = 0;
};

template <class R>
std::vector<R> to_r(const std::vector<double>& v) {
    std::vector<R> out;
    out.reserve(v.size());
    for (double x : v) out.emplace_back(x);
    return out;
}

long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

template <class R>
trial_results<R> run_trial(int max_i, std::uint64_t seed) {
    using eng_t = basic_recursion_engine<R>;
    using C = typename eng_t::complex_type;
    using std::abs;

    trial_results<R> res;
    trial_rng rng(seed);
    eng_t eng;

    // reduction identity on a random valid (I, K, k)
    for (int attempt = 0; attempt < 6; ++attempt) {
        const int I = rng.pick(2, max_i);
        std::vector<int> ks;
        for (int K = 2; K <= I; ++K)
            if ((I - K) % 2 == 0) ks.push_back(K);
        if (ks.empty()) break;  // no reducible level at this order
        const int K = ks[static_cast<std::size_t>(rng.pick(0, static_cast<int>(ks.size()) - 1))];
        const int k = rng.pick(1, K - 1);
        const int P = (I + K) / 2, N = (I - K) / 2;
        std::vector<double> pos(static_cast<std::size_t>(P)), neg(static_cast<std::size_t>(N));
        for (auto& v : pos) v = rng.freq();
        for (auto& v : neg) v = rng.freq();
        const double eta = rng.eta();
        const auto rr = check_reduction_t<R>(eng, R(eta), to_r<R>(pos), to_r<R>(neg), k);
        if (rr.pole) { ++res.resampled; continue; }
        res.red_f = std::max(res.red_f, rr.f_rel);
        res.red_g = std::max(res.red_g, rr.g_rel);
        break;
    }

    // purely-imaginary f_{I,0} on even I
    for (int attempt = 0; attempt < 6; ++attempt) {
        const int half = std::max(1, max_i / 2);
        const int n = rng.pick(1, half);
        std::vector<double> pos(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n));
        for (auto& v : pos) v = rng.freq();
        for (auto& v : neg) v = rng.freq();
        const double eta = rng.eta();
        const auto f = eng.f(R(eta), to_r<R>(pos), to_r<R>(neg));
        if (f.pole) { ++res.resampled; continue; }
        const double mag = to_double(abs(f.value));
        if (mag > 1e-30)
            res.imag = std::max(res.imag, to_double(abs(f.value.real())) / mag);
        break;
    }

    // swap symmetry of f_{I,0} on zero-sum signatures
    for (int attempt = 0; attempt < 6; ++attempt) {
        const int half = std::max(1, max_i / 2);
        const int n = rng.pick(1, half);
        std::vector<double> pos(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n));
        for (auto& v : pos) v = rng.freq();
        double sum = 0;
        for (double v : pos) sum += v;
        double partial = 0;
        for (int j = 0; j + 1 < n; ++j) {
            neg[static_cast<std::size_t>(j)] = rng.freq();
            partial += neg[static_cast<std::size_t>(j)];
        }
        neg[static_cast<std::size_t>(n - 1)] = sum - partial;
        const double eta = rng.eta();
        const auto fa = eng.f(R(eta), to_r<R>(pos), to_r<R>(neg));
        const auto fb = eng.f(R(eta), to_r<R>(neg), to_r<R>(pos));
        if (fa.pole || fb.pole) { ++res.resampled; continue; }
        const double scale = std::max({to_double(abs(fa.value)), to_double(abs(fb.value)), 1e-30});
        res.swap_v = std::max(res.swap_v, to_double(abs(fa.value - fb.value)) / scale);
        break;
    }

    // g_{I,1} equals i times the symmetrized average of h_I
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::vector<int> is;
        for (int I = 1; I <= std::min(max_i, 5); I += 2) is.push_back(I);
        const int I = is[static_cast<std::size_t>(rng.pick(0, static_cast<int>(is.size()) - 1))];
        const int P = (I + 1) / 2;
        std::vector<double> pos(static_cast<std::size_t>(P)), neg(static_cast<std::size_t>(P - 1));
        for (auto& v : pos) v = rng.freq();
        for (auto& v : neg) v = rng.freq();
        const double eta = rng.eta();
        const auto g = eng.g(R(eta), to_r<R>(pos), to_r<R>(neg));
        if (g.pole) { ++res.resampled; continue; }

        auto rp = to_r<R>(pos);
        auto rn = to_r<R>(neg);
        std::vector<int> si(static_cast<std::size_t>(P)), ti(static_cast<std::size_t>(std::max(P - 1, 0)));
        std::iota(si.begin(), si.end(), 0);
        C acc(0);
        bool pole = false;
        do {
            std::iota(ti.begin(), ti.end(), 0);
            do {
                std::vector<R> pp, nn;
                for (int j : si) pp.push_back(rp[static_cast<std::size_t>(j)]);
                for (int j : ti) nn.push_back(rn[static_cast<std::size_t>(j)]);
                const auto hv = eng.h(R(eta), pp, nn);
                if (hv.pole) { pole = true; break; }
                acc += hv.value;
            } while (std::next_permutation(ti.begin(), ti.end()));
            if (pole) break;
        } while (std::next_permutation(si.begin(), si.end()));
        if (pole) { ++res.resampled; continue; }
        const C sym = C(R(0), R(1)) * acc / R(factorial(P) * factorial(P - 1));
        const double scale = std::max({to_double(abs(g.value)), to_double(abs(sym)), 1e-30});
        res.gh = std::max(res.gh, to_double(abs(g.value - sym)) / scale);
        break;
    }

    // Dyck-path oracle for f_{I,0}, I in {2, 4}
    for (int attempt = 0; attempt < 6; ++attempt) {
        const int n = rng.pick(1, 2);
        if (2 * n > std::max(max_i, 2)) break;
        std::vector<double> pos(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n));
        for (auto& v : pos) v = rng.freq();
        for (auto& v : neg) v = rng.freq();
        const double eta = rng.eta();
        const auto f = eng.f(R(eta), to_r<R>(pos), to_r<R>(neg));
        const auto hform = f_i0_via_h_t<R>(eng, R(eta), to_r<R>(pos), to_r<R>(neg));
        if (f.pole || hform.pole) { ++res.resampled; continue; }
        const double scale = std::max({to_double(abs(f.value)), to_double(abs(hform.value)), 1e-30});
        res.dyck = std::max(res.dyck, to_double(abs(f.value - hform.value)) / scale);
        break;
    }

    return res;
}

template <class R>
identity_report run_suite(int max_i, int trials, std::uint64_t seed) {
    if (max_i < 2 || max_i > 9)
        throw std::invalid_argument("identity suite: max_I must lie in [2, 9]");
    if (trials < 1) throw std::invalid_argument("identity suite: trials must be positive");

    identity_report rep;
    rep.max_i = max_i;
    rep.trials = trials;
    rep.seed = seed;

    std::vector<trial_results<R>> all(static_cast<std::size_t>(trials));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long t = 0; t < trials; ++t)
        all[static_cast<std::size_t>(t)] =
            run_trial<R>(max_i, splitmix64(seed ^ (0x5851f42d4c957f2dull * static_cast<std::uint64_t>(t + 1))));

    for (const auto& r : all) {
        rep.max_reduction_f = std::max(rep.max_reduction_f, r.red_f);
        rep.max_reduction_g = std::max(rep.max_reduction_g, r.red_g);
        rep.max_imaginary = std::max(rep.max_imaginary, r.imag);
        rep.max_swap = std::max(rep.max_swap, r.swap_v);
        rep.max_gh = std::max(rep.max_gh, r.gh);
        rep.max_dyck = std::max(rep.max_dyck, r.dyck);
        rep.resampled += r.resampled;
    }

    rep.dyck_counts_ok = true;
    for (unsigned n = 1; n <= 4; ++n) {
        const auto profiles = dyck_profiles(static_cast<int>(2 * n));
        if (boost::multiprecision::cpp_int(profiles.size()) != catalan(n - 1))
            rep.dyck_counts_ok = false;
    }
    return rep;
}

} // namespace

double identity_report::worst() const {
    return std::max({max_reduction_f, max_reduction_g, max_imaginary, max_swap, max_gh, max_dyck});
}

identity_report run_identity_suite(int max_i, int trials, std::uint64_t seed) {
    return run_suite<double>(max_i, trials, seed);
}

identity_report run_identity_suite_extended(int max_i, int trials, std::uint64_t seed) {
    return run_suite<real_x>(max_i, trials, seed);
}

} // namespace wvn

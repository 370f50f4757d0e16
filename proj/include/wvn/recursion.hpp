#ifndef WVN_RECURSION_HPP
#define WVN_RECURSION_HPP

// Recursion coefficients f_{I,K}, g_{I,K} and the order-sensitive building
// blocks h_I, together with the symmetric product, the reduction identities,
// the Dyck-path representation of f_{I,0}, and the enumeration of
// nonremovable singularities. The engine is templated on the real scalar so
// the same recursion runs in double or extended precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wvn/errors.hpp"

namespace wvn {

template <class R>
struct complex_for;

template <>
struct complex_for<double> {
    using type = std::complex<double>;
};

inline double to_double(double x) { return x; }
template <class R>
double to_double(const R& x) { return static_cast<double>(x); }

// Ordered pair of frequency tuples indexing f_{I,K} / g_{I,K} / h_I.
// I = P + N, K = P - N; I - K is even automatically.
struct freq_signature {
    std::vector<double> pos;
    std::vector<double> neg;

    int order() const { return static_cast<int>(pos.size() + neg.size()); }  // I
    int level() const { return static_cast<int>(pos.size()) - static_cast<int>(neg.size()); }  // K
    bool valid() const { return order() >= 1 && level() >= 0; }
};

enum class eval_status { finite, pole };

// Return type of every recursion evaluation: value is undefined when a
// denominator tripped the pole guard somewhere along the evaluation.
struct guarded_complex {
    std::complex<double> value{};
    eval_status status = eval_status::finite;
    bool is_pole() const { return status == eval_status::pole; }
};

namespace detail {

// Ascending k-subsets of {0,...,n-1}, lexicographic order.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// Nondecreasing k-tuples over {0,...,n-1} (multiset choices), lexicographic.
template <class Fn>
void for_each_multiset(int n, int k, Fn&& fn) {
    if (k < 0 || (k > 0 && n <= 0)) return;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - 1) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(i)];
    }
}

inline long binomial_count(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

template <class T>
std::vector<T> erase_at(const std::vector<T>& v, std::size_t m) {
    std::vector<T> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i != m) out.push_back(v[i]);
    return out;
}

} // namespace detail

// Evaluation is pure given (eta, signature); the memo only caches values
// that equal fresh recomputation bit for bit. One engine per thread
// (per-worker caches); parallel drivers construct their own.
template <class R>
class basic_recursion_engine {
public:
    using real_type = R;
    using complex_type = typename complex_for<R>::type;

    struct guarded {
        complex_type value{};
        bool pole = false;
    };

    explicit basic_recursion_engine(double pole_tol = 1e-12) : pole_tol_(pole_tol) {}

    double pole_tol() const { return pole_tol_; }
    std::size_t cache_size() const { return memo_.size(); }
    void clear_cache() { memo_.clear(); }

    // f_{I,K}(eta; pos; neg). Symmetric in pos and in neg; memoized on the
    // sorted tuples. Zero for K < 0, K > I, or I < 1.
    guarded f(const R& eta, std::vector<R> pos, std::vector<R> neg) {
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
        return f_sorted(eta, std::move(pos), std::move(neg));
    }

    // g_{I,K} = iK / (sum(pos) - sum(neg) - K eta) * f_{I,K}. g_{I,0} == 0
    // before any denominator is looked at.
    guarded g(const R& eta, std::vector<R> pos, std::vector<R> neg) {
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
        return g_sorted(eta, std::move(pos), std::move(neg));
    }

    // h_I on ordered tuples, |pos| == |neg| + 1 (odd I); |pos| == |neg|
    // evaluates the even-order convention h_I == 0. The last negative
    // frequency enters only the prefactor denominator.
    guarded h(const R& eta, const std::vector<R>& pos, const std::vector<R>& neg) {
        const std::size_t P = pos.size();
        if (P == neg.size()) return {complex_type(0), false};
        if (P != neg.size() + 1)
            throw std::invalid_argument("eval_h: need |pos| == |neg| + 1 (or |pos| == |neg| for the even case)");
        if (P == 1) {
            const R d = pos[0] - eta;
            using std::abs;
            const R scale = R(1) + abs(pos[0]) + abs(eta);
            if (abs(d) < R(pole_tol_) * scale) return {complex_type(0), true};
            return {complex_type(R(1) / d), false};
        }
        memo_key key{'h', eta, pos, neg};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        using std::abs;
        R sp(0), sn(0);
        for (const auto& v : pos) sp += v;
        for (const auto& v : neg) sn += v;
        const R d = sp - sn - eta;
        const R scale = R(1) + abs(sp) + abs(sn) + abs(eta);
        guarded out{};
        if (abs(d) < R(pole_tol_) * scale) {
            out.pole = true;
        } else {
            const int I = 2 * static_cast<int>(P) - 1;
            complex_type acc(0);
            bool pole = false;
            for (int m = 1; m <= I - 2 && !pole; m += 2) {
                const std::size_t q = static_cast<std::size_t>((m + 1) / 2);
                std::vector<R> lp(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(q));
                std::vector<R> ln(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(q - 1));
                std::vector<R> rp(pos.begin() + static_cast<std::ptrdiff_t>(q), pos.end());
                std::vector<R> rn(neg.begin() + static_cast<std::ptrdiff_t>(q - 1),
                                  neg.begin() + static_cast<std::ptrdiff_t>(P - 2));
                const guarded hl = h(eta, lp, ln);
                const guarded hr = h(eta, rp, rn);
                if (hl.pole || hr.pole) { pole = true; break; }
                acc += hl.value * hr.value;
            }
            if (pole) out.pole = true;
            else out.value = acc / d;
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

private:
    struct memo_key {
        char kind;
        R eta;
        std::vector<R> pos, neg;
        bool operator<(const memo_key& o) const {
            if (kind != o.kind) return kind < o.kind;
            if (eta != o.eta) return eta < o.eta;
            if (pos != o.pos) return pos < o.pos;
            return neg < o.neg;
        }
    };

    guarded f_sorted(const R& eta, std::vector<R> pos, std::vector<R> neg) {
        const int P = static_cast<int>(pos.size());
        const int N = static_cast<int>(neg.size());
        const int I = P + N;
        const int K = P - N;
        if (I < 1 || K < 0 || K > I) return {complex_type(0), false};
        if (I == 1) return {complex_type(1), false};  // f_{1,1}

        memo_key key{'f', eta, pos, neg};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        // omega_{-1} = +1 consumes one positive frequency, omega_{+1} = -1
        // consumes one negative; the permutation average collapses to an
        // average over the dropped element.
        complex_type acc(0);
        bool pole = false;
        if (P > 0) {
            complex_type s(0);
            for (int m = 0; m < P && !pole; ++m) {
                const guarded r = g_sorted(eta, detail::erase_at(pos, static_cast<std::size_t>(m)), neg);
                if (r.pole) pole = true;
                else s += r.value;
            }
            if (!pole) acc += s / R(P);
        }
        if (N > 0 && !pole) {
            complex_type s(0);
            for (int m = 0; m < N && !pole; ++m) {
                const guarded r = g_sorted(eta, pos, detail::erase_at(neg, static_cast<std::size_t>(m)));
                if (r.pole) pole = true;
                else s += r.value;
            }
            if (!pole) acc -= s / R(N);
        }
        const guarded out = pole ? guarded{complex_type(0), true} : guarded{acc, false};
        memo_.emplace(std::move(key), out);
        return out;
    }

    guarded g_sorted(const R& eta, std::vector<R> pos, std::vector<R> neg) {
        const int P = static_cast<int>(pos.size());
        const int N = static_cast<int>(neg.size());
        const int I = P + N;
        const int K = P - N;
        if (K <= 0 || K > I || I < 1) return {complex_type(0), false};

        memo_key key{'g', eta, pos, neg};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        using std::abs;
        R sp(0), sn(0);
        for (const auto& v : pos) sp += v;
        for (const auto& v : neg) sn += v;
        const R keta = R(K) * eta;
        const R d = sp - sn - keta;
        const R scale = R(1) + abs(sp) + abs(sn) + abs(keta);
        guarded out{};
        if (abs(d) < R(pole_tol_) * scale) {
            out.pole = true;
        } else {
            const guarded fr = f_sorted(eta, std::move(pos), std::move(neg));
            if (fr.pole) out.pole = true;
            else out.value = complex_type(R(0), R(K)) / d * fr.value;
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

    double pole_tol_;
    std::map<memo_key, guarded> memo_;
};

using recursion_engine = basic_recursion_engine<double>;

// --- public spec operations (double precision) ------------------------------

inline guarded_complex to_guarded(const recursion_engine::guarded& g) {
    return {g.value, g.pole ? eval_status::pole : eval_status::finite};
}

inline guarded_complex eval_f(recursion_engine& eng, double eta, const freq_signature& sig) {
    return to_guarded(eng.f(eta, sig.pos, sig.neg));
}

inline guarded_complex eval_g(recursion_engine& eng, double eta, const freq_signature& sig) {
    return to_guarded(eng.g(eta, sig.pos, sig.neg));
}

inline guarded_complex eval_h(recursion_engine& eng, double eta,
                              const std::vector<double>& pos, const std::vector<double>& neg) {
    return to_guarded(eng.h(eta, pos, neg));
}

// --- symmetric product -------------------------------------------------------

// An evaluator together with the number of positive/negative frequency slots
// it consumes.
template <class R>
struct arity_evaluator {
    int pos_arity = 0;
    int neg_arity = 0;
    std::function<typename basic_recursion_engine<R>::guarded(
        const R&, const std::vector<R>&, const std::vector<R>&)> fn;
};

// (fa (.) fb)(eta; pos; neg): average of fa*fb over all permutation splits,
// computed as a subset sum with multinomial weights.
template <class R>
typename basic_recursion_engine<R>::guarded
sym_product_t(const arity_evaluator<R>& fa, const arity_evaluator<R>& fb,
              const R& eta, const std::vector<R>& pos, const std::vector<R>& neg) {
    using C = typename basic_recursion_engine<R>::complex_type;
    const int P = static_cast<int>(pos.size());
    const int N = static_cast<int>(neg.size());
    if (fa.pos_arity + fb.pos_arity != P || fa.neg_arity + fb.neg_arity != N)
        throw std::invalid_argument("sym_product: arity mismatch with signature");

    C acc(0);
    bool pole = false;
    detail::for_each_combination(P, fa.pos_arity, [&](const std::vector<int>& pi) {
        if (pole) return;
        std::vector<R> pa, pb;
        pa.reserve(static_cast<std::size_t>(fa.pos_arity));
        pb.reserve(static_cast<std::size_t>(fb.pos_arity));
        std::size_t next = 0;
        for (int i = 0; i < P; ++i) {
            if (next < pi.size() && pi[next] == i) { pa.push_back(pos[static_cast<std::size_t>(i)]); ++next; }
            else pb.push_back(pos[static_cast<std::size_t>(i)]);
        }
        detail::for_each_combination(N, fa.neg_arity, [&](const std::vector<int>& ni) {
            if (pole) return;
            std::vector<R> na, nb;
            std::size_t nxt = 0;
            for (int i = 0; i < N; ++i) {
                if (nxt < ni.size() && ni[nxt] == i) { na.push_back(neg[static_cast<std::size_t>(i)]); ++nxt; }
                else nb.push_back(neg[static_cast<std::size_t>(i)]);
            }
            const auto ra = fa.fn(eta, pa, na);
            if (ra.pole) { pole = true; return; }
            const auto rb = fb.fn(eta, pb, nb);
            if (rb.pole) { pole = true; return; }
            acc += ra.value * rb.value;
        });
    });
    if (pole) return {C(0), true};
    const long count = detail::binomial_count(P, fa.pos_arity) * detail::binomial_count(N, fa.neg_arity);
    return {acc / R(count), false};
}

inline guarded_complex sym_product(const arity_evaluator<double>& fa, const arity_evaluator<double>& fb,
                                   double eta, const freq_signature& sig) {
    const auto r = sym_product_t<double>(fa, fb, eta, sig.pos, sig.neg);
    return {r.value, r.pole ? eval_status::pole : eval_status::finite};
}

// --- reduction identities (f_{I,K} = sum_i f_{i,k} (.) g_{I-i,K-k}) ----------

struct reduction_residuals {
    double f_abs = 0, f_rel = 0;
    double g_abs = 0, g_rel = 0;
    bool pole = false;
};

template <class R>
reduction_residuals check_reduction_t(basic_recursion_engine<R>& eng, const R& eta,
                                      const std::vector<R>& pos, const std::vector<R>& neg, int k) {
    using C = typename basic_recursion_engine<R>::complex_type;
    const int P = static_cast<int>(pos.size());
    const int N = static_cast<int>(neg.size());
    const int I = P + N;
    const int K = P - N;
    if (!(0 < k && k < K && K <= I))
        throw std::invalid_argument("check_reduction: need 0 < k < K <= I");

    const auto df = eng.f(eta, pos, neg);
    const auto dg = eng.g(eta, pos, neg);
    if (df.pole || dg.pole) return {.pole = true};

    C sum_f(0), sum_g(0);
    bool pole = false;
    for (int i = k; i <= I - (K - k); ++i) {
        if ((i - k) % 2 != 0) continue;
        const int p1 = (i + k) / 2, n1 = (i - k) / 2;
        if (p1 > P || n1 > N) continue;
        arity_evaluator<R> fa{p1, n1,
            [&eng](const R& e, const std::vector<R>& p, const std::vector<R>& n) { return eng.f(e, p, n); }};
        arity_evaluator<R> ga{p1, n1,
            [&eng](const R& e, const std::vector<R>& p, const std::vector<R>& n) { return eng.g(e, p, n); }};
        arity_evaluator<R> gb{P - p1, N - n1,
            [&eng](const R& e, const std::vector<R>& p, const std::vector<R>& n) { return eng.g(e, p, n); }};
        const auto tf = sym_product_t<R>(fa, gb, eta, pos, neg);
        const auto tg = sym_product_t<R>(ga, gb, eta, pos, neg);
        if (tf.pole || tg.pole) { pole = true; break; }
        sum_f += tf.value;
        sum_g += tg.value;
    }
    if (pole) return {.pole = true};

    using std::abs;
    reduction_residuals out;
    const double fs = std::max({to_double(abs(df.value)), to_double(abs(sum_f)), 1e-30});
    const double gs = std::max({to_double(abs(dg.value)), to_double(abs(sum_g)), 1e-30});
    out.f_abs = to_double(abs(df.value - sum_f));
    out.g_abs = to_double(abs(dg.value - sum_g));
    out.f_rel = out.f_abs / fs;
    out.g_rel = out.g_abs / gs;
    return out;
}

inline reduction_residuals check_reduction(recursion_engine& eng, double eta,
                                           const freq_signature& sig, int k) {
    return check_reduction_t<double>(eng, eta, sig.pos, sig.neg, k);
}

// --- Dyck profiles and the H-representation of f_{I,0} -----------------------

// All (I+1)-tuples s with |s_{i+1}-s_i| = 1, s_0 = s_I = 0 and s_i >= 1 in
// between; there are Catalan(I/2 - 1) of them.
std::vector<std::vector<int>> dyck_profiles(int I);

// Independent oracle for f_{I,0} (I = 2n): permutation-averaged product over
// Dyck profiles. The numerator factor uses the step leaving node m,
// i (s_{m+1} - s_m) s_m; see the I=2 and I=4 closed forms.
template <class R>
typename basic_recursion_engine<R>::guarded
f_i0_via_h_t(const basic_recursion_engine<R>& eng, const R& eta,
             const std::vector<R>& pos, const std::vector<R>& neg) {
    using C = typename basic_recursion_engine<R>::complex_type;
    using std::abs;
    const int n = static_cast<int>(pos.size());
    if (n < 1 || neg.size() != pos.size())
        throw std::invalid_argument("f_i0_via_h: need |pos| == |neg| >= 1");
    const int I = 2 * n;
    const auto paths = dyck_profiles(I);

    std::vector<int> sigma(static_cast<std::size_t>(n)), tau(static_cast<std::size_t>(n));
    C acc(0);
    bool pole = false;
    long nperm = 0;

    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            ++nperm;
            for (const auto& s : paths) {
                C term(1);
                for (int m = 1; m <= I - 1; ++m) {
                    const int sm = s[static_cast<std::size_t>(m)];
                    const int step = s[static_cast<std::size_t>(m + 1)] - sm;
                    const int np = (m + sm) / 2, nn = (m - sm) / 2;
                    R dp(0), dn(0);
                    for (int j = 0; j < np; ++j) dp += pos[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
                    for (int j = 0; j < nn; ++j) dn += neg[static_cast<std::size_t>(tau[static_cast<std::size_t>(j)])];
                    const R seta = R(sm) * eta;
                    const R den = dp - dn - seta;
                    const R scale = R(1) + abs(dp) + abs(dn) + abs(seta);
                    if (abs(den) < R(eng.pole_tol()) * scale) { pole = true; break; }
                    term *= C(R(0), R(step * sm)) / den;
                }
                if (pole) break;
                acc += term;
            }
            if (pole) break;
        } while (std::next_permutation(tau.begin(), tau.end()));
        if (pole) break;
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    if (pole) return {C(0), true};
    return {acc / R(nperm), false};
}

inline guarded_complex f_i0_via_h(const recursion_engine& eng, double eta,
                                  const std::vector<double>& pos, const std::vector<double>& neg) {
    const auto r = f_i0_via_h_t<double>(eng, eta, pos, neg);
    return {r.value, r.pole ? eval_status::pole : eval_status::finite};
}

// --- nonremovable singularities ----------------------------------------------

// One decomposition eta = sum_{j<=m} phi[k_j] - sum_{j<m} phi[l_j]; k and l
// are sorted indices into the input frequency list.
struct sp_witness {
    int m = 0;
    std::vector<int> k, l;
};

struct pole_point {
    double eta = 0;
    sp_witness witness;
};

// All eta of the form above with 1 <= m <= (p-1)/2, frequencies drawn with
// repetition from phi; deduplicated at 1e-12 absolute with a minimal-m
// witness (ties broken lexicographically on the sorted index tuples).
std::vector<pole_point> nonremovable_poles(const std::vector<double>& phi, int p,
                                           std::size_t cap = 10'000'000);
std::vector<pole_point> nonremovable_poles_serial(const std::vector<double>& phi, int p,
                                                  std::size_t cap = 10'000'000);

} // namespace wvn

#endif

#include "wvn/recursion.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wvn {

std::vector<std::vector<int>> dyck_profiles(int I) {
    if (I < 2 || I % 2 != 0)
        throw std::invalid_argument("dyck_profiles: I must be even and >= 2");
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(I) + 1, 0);
    // depth-first, down-step before up-step, so the output order is fixed
    auto rec = [&](auto&& self, int i) -> void {
        if (i == I) {
            if (s[static_cast<std::size_t>(I)] == 0) out.push_back(s);
            return;
        }
        for (int step : {-1, +1}) {
            const int v = s[static_cast<std::size_t>(i)] + step;
            const bool interior = i + 1 <= I - 1;
            if (interior && v < 1) continue;
            if (!interior && v != 0) continue;
            const int remaining = I - (i + 1);
            if (v > remaining) continue;  // cannot return to 0 in time
            s[static_cast<std::size_t>(i + 1)] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

struct candidate {
    double eta;
    sp_witness w;
};

bool witness_less(const sp_witness& a, const sp_witness& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.k != b.k) return a.k < b.k;
    return a.l < b.l;
}

// Emit every multiset choice (k_1..k_m, l_1..l_{m-1}) with k fixed to start
// at k1 (nondecreasing tuples).
void emit_for_first_index(const std::vector<double>& phi, int m, int k1,
                          std::vector<candidate>& out) {
    const int F = static_cast<int>(phi.size());
    std::vector<int> k(static_cast<std::size_t>(m));
    k[0] = k1;
    double sum_k1 = phi[static_cast<std::size_t>(k1)];

    auto emit_l = [&](const std::vector<int>& kk, double sk) {
        detail::for_each_multiset(F, m - 1, [&](const std::vector<int>& ll) {
            double e = sk;
            for (int li : ll) e -= phi[static_cast<std::size_t>(li)];
            candidate c;
            c.eta = e;
            c.w.m = m;
            c.w.k = kk;
            c.w.l = ll;
            out.push_back(std::move(c));
        });
    };

    if (m == 1) {
        emit_l(k, sum_k1);
        return;
    }
    // remaining m-1 indices nondecreasing in [k1, F)
    detail::for_each_multiset(F - k1, m - 1, [&](const std::vector<int>& rest) {
        double sk = sum_k1;
        for (int j = 0; j < m - 1; ++j) {
            k[static_cast<std::size_t>(j + 1)] = k1 + rest[static_cast<std::size_t>(j)];
            sk += phi[static_cast<std::size_t>(k[static_cast<std::size_t>(j + 1)])];
        }
        emit_l(k, sk);
    });
}

std::vector<pole_point> dedup(std::vector<candidate>& cand, double tol) {
    std::sort(cand.begin(), cand.end(), [](const candidate& a, const candidate& b) {
        if (a.eta != b.eta) return a.eta < b.eta;
        return witness_less(a.w, b.w);
    });
    std::vector<pole_point> out;
    std::size_t i = 0;
    while (i < cand.size()) {
        const double anchor = cand[i].eta;
        std::size_t best = i;
        std::size_t j = i;
        while (j < cand.size() && cand[j].eta - anchor < tol) {
            if (witness_less(cand[j].w, cand[best].w)) best = j;
            ++j;
        }
        out.push_back({cand[best].eta, cand[best].w});
        i = j;
    }
    return out;
}

std::vector<pole_point> build(const std::vector<double>& phi, int p, std::size_t cap, bool parallel) {
    if (phi.empty()) throw std::invalid_argument("nonremovable_poles: empty frequency set");
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("nonremovable_poles: p must be odd and >= 3");
    const int n = (p - 1) / 2;
    const int F = static_cast<int>(phi.size());
    double combos = 1;
    for (int i = 0; i < 2 * n - 1; ++i) combos *= F;
    if (combos > static_cast<double>(cap))
        throw cap_exceeded_error("nonremovable_poles: |Phi|^(2n-1) exceeds the enumeration cap");

    // task list (m, k1), fixed order
    std::vector<std::pair<int, int>> tasks;
    for (int m = 1; m <= n; ++m)
        for (int k1 = 0; k1 < F; ++k1) tasks.emplace_back(m, k1);

    std::vector<std::vector<candidate>> buckets(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long t = 0; t < static_cast<long>(tasks.size()); ++t) {
        const auto [m, k1] = tasks[static_cast<std::size_t>(t)];
        emit_for_first_index(phi, m, k1, buckets[static_cast<std::size_t>(t)]);
    }

    std::vector<candidate> all;
    std::size_t total = 0;
    for (const auto& b : buckets) total += b.size();
    all.reserve(total);
    for (auto& b : buckets)
        for (auto& c : b) all.push_back(std::move(c));
    return dedup(all, 1e-12);
}

} // namespace

std::vector<pole_point> nonremovable_poles(const std::vector<double>& phi, int p, std::size_t cap) {
    return build(phi, p, cap, true);
}

std::vector<pole_point> nonremovable_poles_serial(const std::vector<double>& phi, int p, std::size_t cap) {
    return build(phi, p, cap, false);
}

} // namespace wvn

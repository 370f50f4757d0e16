// Serial vs OpenMP timing for the enumeration kernels. The parallel kernels
// sum fixed blocks combined in index order, so the checksum column must
// match the serial reference exactly.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "wvn/exceptional_set.hpp"
#include "wvn/infinite_type.hpp"
#include "wvn/operator_data.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wvn;

namespace {

template <class F>
double time_of(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

operator_data geometric_data(int n_terms) {
    operator_data d;
    d.p = 7;
    d.alpha = 0.2;
    d.finite = false;
    for (int j = 1; j <= n_terms; ++j)
        d.terms.push_back({std::complex<double>(std::pow(2.0, -0.35 * j), 0),
                           1.5 + 0.07 * j, envelope::power_law_of(0.5, 1.0)});
    return d;
}

void row(const std::string& name, double serial_s, double parallel_s, bool same) {
    std::printf("%-34s %10.3f s %10.3f s %8.2fx   %s\n", name.c_str(), serial_s, parallel_s,
                serial_s / parallel_s, same ? "checksums match" : "CHECKSUM MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial", "openmp", "speedup");

    constexpr std::size_t cap = 400'000'000;
    {
        const auto d = geometric_data(40);
        divisor_sum_report rs, rp;
        const double ts = time_of([&] { rs = small_divisor_sum_serial(d, -1.0, 5, 40, {}, cap); });
        const double tp = time_of([&] { rp = small_divisor_sum(d, -1.0, 5, 40, {}, cap); });
        row("small_divisor_sum I=5, J=40", ts, tp, rs.partial == rp.partial);
    }
    {
        auto d = geometric_data(10);
        d.p = 9;
        divisor_sum_report rs, rp;
        const double ts = time_of([&] { rs = small_divisor_sum_serial(d, -1.0, 7, 10, {}, cap); });
        const double tp = time_of([&] { rp = small_divisor_sum(d, -1.0, 7, 10, {}, cap); });
        row("small_divisor_sum I=7, J=10", ts, tp, rs.partial == rp.partial);
    }
    {
        std::vector<double> phi;
        for (int i = 0; i < 14; ++i) phi.push_back(0.9 + 0.31 * i);
        exceptional_set ss, sp;
        const double ts = time_of([&] { ss = build_sp_serial(phi, 9, cap); });
        const double tp = time_of([&] { sp = build_sp(phi, 9, cap); });
        bool same = ss.points.size() == sp.points.size();
        for (std::size_t i = 0; same && i < ss.points.size(); ++i)
            same = ss.points[i].eta == sp.points[i].eta;
        row("build_sp |Phi|=14, p=9", ts, tp, same);
    }
    {
        const auto d = geometric_data(16);
        std::vector<double> grid;
        for (int i = 0; i < 12; ++i) grid.push_back(-2.0 + 0.37 * i);
        std::vector<eta_profile_entry> es, ep;
        const double ts = time_of([&] { es = exceptional_profile_serial(d, 7, grid, 16, cap); });
        const double tp = time_of([&] { ep = exceptional_profile(d, 7, grid, 16, cap); });
        bool same = es.size() == ep.size();
        for (std::size_t i = 0; same && i < es.size(); ++i)
            same = es[i].max_partial == ep[i].max_partial;
        row("exceptional_profile 12 etas, I<=5", ts, tp, same);
    }
    return 0;
}

#ifndef WVN_IDENTITY_SUITE_HPP
#define WVN_IDENTITY_SUITE_HPP

// Seeded randomized checks of the recursion identities: the reduction of
// f_{I,K}/g_{I,K} into k-level products, the purely-imaginary and swap
// properties of f_{I,0}, the g/h correspondence and the Dyck-path oracle.
// Trials draw frequencies uniformly from [1,10] and eta from [-5,5]; guarded
// poles are resampled. Fixed seed gives a bit-identical report.

#include <cstdint>
#include <string>

namespace wvn {

struct identity_report {
    int max_i = 5;
    int trials = 0;
    std::uint64_t seed = 0;
    double max_reduction_f = 0;
    double max_reduction_g = 0;
    double max_imaginary = 0;  // |Re f_{I,0}| / |f_{I,0}|, even I
    double max_swap = 0;       // zero-sum swap symmetry of f_{I,0}
    double max_gh = 0;         // g_{I,1} vs symmetrized h_I, I in {1,3,5}
    double max_dyck = 0;       // f_{I,0} vs the Dyck-path oracle, I in {2,4}
    bool dyck_counts_ok = false;  // |profiles(2n)| == Catalan(n-1), n <= 4
    int resampled = 0;

    double worst() const;
    bool pass(double tol = 1e-10) const { return dyck_counts_ok && worst() < tol; }
};

identity_report run_identity_suite(int max_i, int trials, std::uint64_t seed);

// Same trials evaluated with the 50-digit engine.
identity_report run_identity_suite_extended(int max_i, int trials, std::uint64_t seed);

} // namespace wvn

#endif

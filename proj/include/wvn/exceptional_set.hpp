#ifndef WVN_EXCEPTIONAL_SET_HPP
#define WVN_EXCEPTIONAL_SET_HPP

// The exceptional set S_p: all E = eta/2 with eta a combination of m
// positive and m-1 negative frequencies, m <= (p-1)/2. Only these energies
// can carry embedded pure points for finite-type data.

#include <optional>
#include <vector>

#include "wvn/recursion.hpp"

namespace wvn {

struct sp_point {
    double E = 0;
    double eta = 0;   // = 2E
    sp_witness witness;
};

struct exceptional_set {
    int p = 3;
    std::vector<double> phi;
    std::vector<sp_point> points;  // sorted by E, deduplicated at 1e-12 on eta
};

exceptional_set build_sp(const std::vector<double>& phi, int p, std::size_t cap = 10'000'000);
exceptional_set build_sp_serial(const std::vector<double>& phi, int p, std::size_t cap = 10'000'000);

// Witness of the nearest point within tol of E, if any.
std::optional<sp_point> is_exceptional(double E, const exceptional_set& set, double tol);

// Points of S_p not present in S_{p-2} (tolerance 1e-12 on eta).
std::vector<sp_point> sp_difference(const std::vector<double>& phi, int p,
                                    std::size_t cap = 10'000'000);

} // namespace wvn

#endif

#include "wvn/exceptional_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wvn {

namespace {

exceptional_set from_poles(std::vector<pole_point> poles, const std::vector<double>& phi, int p) {
    exceptional_set s;
    s.p = p;
    s.phi = phi;
    s.points.reserve(poles.size());
    for (auto& q : poles)
        s.points.push_back({q.eta / 2.0, q.eta, std::move(q.witness)});
    std::sort(s.points.begin(), s.points.end(),
              [](const sp_point& a, const sp_point& b) { return a.E < b.E; });
    return s;
}

} // namespace

exceptional_set build_sp(const std::vector<double>& phi, int p, std::size_t cap) {
    return from_poles(nonremovable_poles(phi, p, cap), phi, p);
}

exceptional_set build_sp_serial(const std::vector<double>& phi, int p, std::size_t cap) {
    return from_poles(nonremovable_poles_serial(phi, p, cap), phi, p);
}

std::optional<sp_point> is_exceptional(double E, const exceptional_set& set, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("is_exceptional: tol must be positive");
    if (set.points.empty()) return std::nullopt;
    const auto it = std::lower_bound(set.points.begin(), set.points.end(), E,
                                     [](const sp_point& a, double v) { return a.E < v; });
    const sp_point* best = nullptr;
    double best_d = tol;
    if (it != set.points.end() && std::abs(it->E - E) <= best_d) {
        best = &*it;
        best_d = std::abs(it->E - E);
    }
    if (it != set.points.begin()) {
        const auto* prev = &*(it - 1);
        if (std::abs(prev->E - E) < best_d ||
            (best == nullptr && std::abs(prev->E - E) <= tol)) best = prev;
    }
    if (!best) return std::nullopt;
    return *best;
}

std::vector<sp_point> sp_difference(const std::vector<double>& phi, int p, std::size_t cap) {
    if (p < 5 || p % 2 == 0)
        throw std::invalid_argument("sp_difference: p must be odd and >= 5");
    const exceptional_set big = build_sp(phi, p, cap);
    const exceptional_set small = build_sp(phi, p - 2, cap);
    std::vector<sp_point> out;
    for (const auto& pt : big.points) {
        bool covered = false;
        for (const auto& q : small.points)
            if (std::abs(q.eta - pt.eta) < 1e-12) { covered = true; break; }
        if (!covered) out.push_back(pt);
    }
    return out;
}

} // namespace wvn

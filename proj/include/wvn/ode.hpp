#ifndef WVN_ODE_HPP
#define WVN_ODE_HPP

// Adaptive eighth-order Dormand-Prince integrator (DOP853 coefficients of
// Hairer, Norsett & Wanner) with the combined 5th/3rd-order error estimator.
// The high order keeps conservation drift negligible over 1e4-length
// oscillatory integrations at the default tolerances.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "wvn/errors.hpp"

namespace wvn {

struct ode_options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = std::numeric_limits<double>::infinity();
    double min_step = 1e-12;
    double safety = 0.9;
};

template <std::size_t N>
class dop853_stepper {
public:
    using state = std::array<double, N>;

    explicit dop853_stepper(ode_options opt) : opt_(opt) {}

    // Advance y from x to exactly x_target (> x). obs(x, y) runs after every
    // accepted step. The step suggestion carries over between calls.
    template <class RHS, class Obs>
    void advance(RHS&& rhs, double& x, state& y, double x_target, Obs&& obs) {
        if (!(x_target > x)) return;
        state k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, yt, ynew, slope;

        rhs(x, y, k1);
        if (h_ <= 0) h_ = initial_step(rhs, x, y, k1, x_target);
        bool rejected = false;

        while (x < x_target) {
            bool last = false;
            if (x + 1.01 * h_ >= x_target) {
                h_ = x_target - x;
                last = true;
            }
            if (h_ < opt_.min_step && !last)
                throw step_underflow_error("dop853: step size underflow at x=" + std::to_string(x));
            if (x + h_ == x)
                throw step_underflow_error("dop853: step vanished in precision at x=" + std::to_string(x));

            const double h = h_;
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
            rhs(x + c2 * h, yt, k2);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(x + c3 * h, yt, k3);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
            rhs(x + c4 * h, yt, k4);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(x + c5 * h, yt, k5);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(x + c6 * h, yt, k6);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            rhs(x + c7 * h, yt, k7);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
            rhs(x + c8 * h, yt, k8);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
            rhs(x + c9 * h, yt, k9);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                                    a108 * k8[i] + a109 * k9[i]);
            rhs(x + c10 * h, yt, k10);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                                    a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
            rhs(x + c11 * h, yt, k2);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                                    a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i]);
            rhs(x + h, yt, k3);

            double err5 = 0, err3 = 0;
            for (std::size_t i = 0; i < N; ++i) {
                slope[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                           b11 * k2[i] + b12 * k3[i];
                ynew[i] = y[i] + h * slope[i];
                const double sk = 1.0 / (opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i])));
                const double e3 = (slope[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k3[i]) * sk;
                err3 += e3 * e3;
                const double e5 = (er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                                   er10 * k10[i] + er11 * k2[i] + er12 * k3[i]) * sk;
                err5 += e5 * e5;
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0) deno = 1;
            const double err = h * err5 * std::sqrt(1.0 / (static_cast<double>(N) * deno));

            const double fac11 = std::pow(err, 0.125);
            if (err <= 1.0) {
                x = last ? x_target : x + h;
                y = ynew;
                obs(x, y);
                if (x < x_target) rhs(x, y, k1);
                double hnew = h / std::max(1.0 / 6.0, std::min(3.0, fac11 / opt_.safety));
                if (rejected) hnew = std::min(hnew, h);
                rejected = false;
                h_ = std::min(hnew, opt_.max_step);
            } else {
                rejected = true;
                const double hnew = h / std::min(3.0, fac11 / opt_.safety);
                if (hnew < opt_.min_step)
                    throw step_underflow_error("dop853: controller underflow at x=" + std::to_string(x));
                h_ = hnew;
            }
        }
    }

    template <class RHS>
    void advance(RHS&& rhs, double& x, state& y, double x_target) {
        advance(rhs, x, y, x_target, [](double, const state&) {});
    }

    void reset() { h_ = 0; }

private:
    template <class RHS>
    double initial_step(RHS&& rhs, double x, const state& y, const state& f0, double x_target) {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sk) * (y[i] / sk);
            d1 += (f0[i] / sk) * (f0[i] / sk);
        }
        double h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * std::sqrt(d0 / d1) : 1e-6;
        h = std::min({h, opt_.max_step, x_target - x});
        // one Euler trial to bound the second derivative
        state yt, f1;
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * f0[i];
        rhs(x + h, yt, f1);
        double d2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
            const double dd = (f1[i] - f0[i]) / sk;
            d2 += dd * dd;
        }
        d2 = std::sqrt(d2) / h;
        const double dm = std::max(std::sqrt(d1), d2);
        double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 1.0 / 8.0) : std::max(1e-6, h * 1e-3);
        h = std::min({100 * h, h1, opt_.max_step, x_target - x});
        return std::max(h, opt_.min_step);
    }

    // DOP853 tableau (Hairer, Norsett & Wanner, Solving ODEs I)
    static constexpr double c2 = 0.526001519587677318785587544488e-01;
    static constexpr double c3 = 0.789002279381515978178381316732e-01;
    static constexpr double c4 = 0.118350341907227396726757197510e+00;
    static constexpr double c5 = 0.281649658092772603273242802490e+00;
    static constexpr double c6 = 0.333333333333333333333333333333e+00;
    static constexpr double c7 = 0.25e+00;
    static constexpr double c8 = 0.307692307692307692307692307692e+00;
    static constexpr double c9 = 0.651282051282051282051282051282e+00;
    static constexpr double c10 = 0.6e+00;
    static constexpr double c11 = 0.857142857142857142857142857142e+00;

    static constexpr double b1 = 5.42937341165687622380535766363e-2;
    static constexpr double b6 = 4.45031289275240888144113950566e0;
    static constexpr double b7 = 1.89151789931450038304281599044e0;
    static constexpr double b8 = -5.8012039600105847814672114227e0;
    static constexpr double b9 = 3.1116436695781989440891606237e-1;
    static constexpr double b10 = -1.52160949662516078556178806805e-1;
    static constexpr double b11 = 2.01365400804030348374776537501e-1;
    static constexpr double b12 = 4.47106157277725905176885569043e-2;

    static constexpr double bhh1 = 0.244094488188976377952755905512e+00;
    static constexpr double bhh2 = 0.733846688281611857341361741547e+00;
    static constexpr double bhh3 = 0.220588235294117647058823529412e-01;

    static constexpr double er1 = 0.1312004499419488073250102996e-01;
    static constexpr double er6 = -0.1225156446376204440720569753e+01;
    static constexpr double er7 = -0.4957589496572501915214079952e+00;
    static constexpr double er8 = 0.1664377182454986536961530415e+01;
    static constexpr double er9 = -0.3503288487499736816886487290e+00;
    static constexpr double er10 = 0.3341791187130174790297318841e+00;
    static constexpr double er11 = 0.8192320648511571246570742613e-01;
    static constexpr double er12 = -0.2235530786388629525884427845e-01;

    static constexpr double a21 = 5.26001519587677318785587544488e-2;
    static constexpr double a31 = 1.97250569845378994544595329183e-2;
    static constexpr double a32 = 5.91751709536136983633785987549e-2;
    static constexpr double a41 = 2.95875854768068491816892993775e-2;
    static constexpr double a43 = 8.87627564304205475450678981324e-2;
    static constexpr double a51 = 2.41365134159266685502369798665e-1;
    static constexpr double a53 = -8.84549479328286085344864962717e-1;
    static constexpr double a54 = 9.24834003261792003115737966543e-1;
    static constexpr double a61 = 3.7037037037037037037037037037e-2;
    static constexpr double a64 = 1.70828608729473871279604482173e-1;
    static constexpr double a65 = 1.25467687566822425016691814123e-1;
    static constexpr double a71 = 3.7109375e-2;
    static constexpr double a74 = 1.70252211019544039314978060272e-1;
    static constexpr double a75 = 6.02165389804559606850219397283e-2;
    static constexpr double a76 = -1.7578125e-2;
    static constexpr double a81 = 3.70920001185047927108779319836e-2;
    static constexpr double a84 = 1.70383925712239993810214054705e-1;
    static constexpr double a85 = 1.07262030446373284651809199168e-1;
    static constexpr double a86 = -1.53194377486244017527936158236e-2;
    static constexpr double a87 = 8.27378916381402288758473766002e-3;
    static constexpr double a91 = 6.24110958716075717114429577812e-1;
    static constexpr double a94 = -3.36089262944694129406857109825e0;
    static constexpr double a95 = -8.68219346841726006818189891453e-1;
    static constexpr double a96 = 2.75920996994467083049415600797e1;
    static constexpr double a97 = 2.01540675504778934086186788979e1;
    static constexpr double a98 = -4.34898841810699588477366255144e1;
    static constexpr double a101 = 4.77662536438264365890433908527e-1;
    static constexpr double a104 = -2.48811461997166764192642586468e0;
    static constexpr double a105 = -5.90290826836842996371446475743e-1;
    static constexpr double a106 = 2.12300514481811942347288949897e1;
    static constexpr double a107 = 1.52792336328824235832596922938e1;
    static constexpr double a108 = -3.32882109689848629194453265587e1;
    static constexpr double a109 = -2.03312017085086261358222928593e-2;
    static constexpr double a111 = -9.3714243008598732571704021658e-1;
    static constexpr double a114 = 5.18637242884406370830023853209e0;
    static constexpr double a115 = 1.09143734899672957818500254654e0;
    static constexpr double a116 = -8.14978701074692612513997267357e0;
    static constexpr double a117 = -1.85200656599969598641566180701e1;
    static constexpr double a118 = 2.27394870993505042818970056734e1;
    static constexpr double a119 = 2.49360555267965238987089396762e0;
    static constexpr double a1110 = -3.0467644718982195003823669022e0;
    static constexpr double a121 = 2.27331014751653820792359768449e0;
    static constexpr double a124 = -1.05344954667372501984066689879e1;
    static constexpr double a125 = -2.00087205822486249909675718444e0;
    static constexpr double a126 = -1.79589318631187989172765950534e1;
    static constexpr double a127 = 2.79488845294199600508499808837e1;
    static constexpr double a128 = -2.85899827713502369474065508674e0;
    static constexpr double a129 = -8.87285693353062954433549289258e0;
    static constexpr double a1210 = 1.23605671757943030647266201528e1;
    static constexpr double a1211 = 6.43392746015763530355970484046e-1;

    ode_options opt_;
    double h_ = 0;
};

} // namespace wvn

#endif

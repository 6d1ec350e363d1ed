#include "kovtop/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kovtop/error.hpp"

namespace kovtop {

namespace {

// Hairer, Norsett & Wanner, DOP853 tableau. The dense-output rows d4..d7 are
// the sixth-order variant that needs no extra stage evaluations.
constexpr double c2 = 0.05260015195876773187856, c3 = 0.07890022793815159781784,
                 c4 = 0.11835034190722739672676, c5 = 0.28164965809277260327324,
                 c6 = 0.33333333333333333333333, c7 = 0.25000000000000000000000,
                 c8 = 0.30769230769230769230769, c9 = 0.65128205128205128205128,
                 c10 = 0.60000000000000000000000, c11 = 0.85714285714285714285714;
constexpr double b1 = 0.05429373411656876223805, b6 = 4.45031289275240888144114,
                 b7 = 1.89151789931450038304282, b8 = -5.80120396001058478146721,
                 b9 = 0.31116436695781989440892, b10 = -0.15216094966251607855618,
                 b11 = 0.20136540080403034837478, b12 = 0.04471061572777259051769;
constexpr double bhh1 = 0.24409448818897637795276, bhh2 = 0.73384668828161185734136,
                 bhh3 = 0.02205882352941176470588;
constexpr double er1 = 0.01312004499419488073250, er6 = -1.22515644637620444072057,
                 er7 = -0.49575894965725019152141, er8 = 1.66437718245498653696153,
                 er9 = -0.35032884874997368168865, er10 = 0.33417911871301747902973,
                 er11 = 0.08192320648511571246571, er12 = -0.02235530786388629525884;
constexpr double a21 = 0.05260015195876773187856, a31 = 0.01972505698453789945446,
                 a32 = 0.05917517095361369836338, a41 = 0.02958758547680684918169,
                 a43 = 0.08876275643042054754507, a51 = 0.24136513415926668550237,
                 a53 = -0.88454947932828608534486, a54 = 0.92483400326179200311574,
                 a61 = 0.03703703703703703703704, a64 = 0.17082860872947387127960,
                 a65 = 0.12546768756682242501669, a71 = 0.03710937500000000000000,
                 a74 = 0.17025221101954403931498, a75 = 0.06021653898045596068502,
                 a76 = -0.01757812500000000000000, a81 = 0.03709200011850479271088,
                 a84 = 0.17038392571223999381021, a85 = 0.10726203044637328465181,
                 a86 = -0.01531943774862440175279, a87 = 0.00827378916381402288758,
                 a91 = 0.62411095871607571711443, a94 = -3.36089262944694129406857,
                 a95 = -0.86821934684172600681819, a96 = 27.5920996994467083049416,
                 a97 = 20.1540675504778934086187, a98 = -43.4898841810699588477366,
                 a101 = 0.47766253643826436589043, a104 = -2.48811461997166764192642,
                 a105 = -0.59029082683684299637145, a106 = 21.2300514481811942347289,
                 a107 = 15.2792336328824235832597, a108 = -33.2882109689848629194453,
                 a109 = -0.02033120170850862613582, a111 = -0.93714243008598732571704,
                 a114 = 5.18637242884406370830024, a115 = 1.09143734899672957818500,
                 a116 = -8.14978701074692612513997, a117 = -18.5200656599969598641566,
                 a118 = 22.7394870993505042818970, a119 = 2.49360555267965238987089,
                 a1110 = -3.04676447189821950038237, a121 = 2.27331014751653820792360,
                 a124 = -10.5344954667372501984067, a125 = -2.00087205822486249909676,
                 a126 = -17.9589318631187989172766, a127 = 27.9488845294199600508500,
                 a128 = -2.85899827713502369474066, a129 = -8.87285693353062954433549,
                 a1210 = 12.3605671757943030647266, a1211 = 0.64339274601576353035597;
constexpr double d41 = -5.40685903845352664250302, d46 = 367.268892700041893590281,
                 d47 = 154.609958204083905482676, d48 = -505.920283865412564024766,
                 d49 = 15.5975154819608130688200, d410 = -26.1936204184402805956691,
                 d411 = -0.74003512364122230844721, d412 = 1.11776539319431476294221,
                 d413 = -0.33333333333333333333333;
constexpr double d51 = 6.51987095363079615048119, d56 = -1066.34956011730205278592,
                 d57 = -351.864047514639508625601, d58 = 1363.51955696662884408368,
                 d59 = -112.727669432657582669864, d510 = 159.796191868560289612921,
                 d511 = -2.13865100308788816220259, d512 = -3.75569172113289760348584,
                 d513 = 7.00000000000000000000000;
constexpr double d61 = 10.4698004763293477204238, d66 = -1380.01473607038123167155,
                 d67 = -531.219827862514074379012, d68 = 1866.98964341870892451324,
                 d69 = -53.3302605020547902574560, d610 = 82.4147560258671369782481,
                 d611 = 7.38443654502992069572676, d612 = 0.41729908012587751149843,
                 d613 = -3.11111111111111111111111;
constexpr double d71 = -16.6338582677165354330709, d76 = 4516.16568914956011730205,
                 d77 = 1393.85185384057776465219, d78 = -5687.52042419481539670071,
                 d79 = 473.965563750151263163661, d710 = -661.810776942355889724311,
                 d711 = -18.0180473354013232598119;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.333;
constexpr double kFacMax = 6.0;

}  // namespace

Dop853::Dop853(OdeRhs rhs, std::size_t dim, double rel_tol, double abs_tol, double max_step)
    : rhs_(std::move(rhs)), n_(dim), rtol_(rel_tol), atol_(abs_tol), hmax_(max_step) {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("integrator tolerances must be positive");
    }
    for (auto* v : {&y_, &ytmp_, &ynew_, &k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &k8_, &k9_,
                    &k10_, &r1_, &r2_, &r3_, &r4_, &r5_, &r6_, &r7_, &r8_}) {
        v->assign(n_, 0.0);
    }
}

void Dop853::init(double t0, std::span<const double> y0, double direction) {
    if (y0.size() != n_) throw ValidationError("initial state has the wrong dimension");
    std::copy(y0.begin(), y0.end(), y_.begin());
    dir_ = direction < 0.0 ? -1.0 : 1.0;
    t_ = t_prev_ = t0;
    accepted_ = 0;
    rhs_(t_, y_, k1_);
    h_ = initial_step();
    r1_ = y_;
    std::fill(r2_.begin(), r2_.end(), 0.0);
    for (auto* v : {&r3_, &r4_, &r5_, &r6_, &r7_, &r8_}) std::fill(v->begin(), v->end(), 0.0);
}

double Dop853::initial_step() const {
    // Hairer's starting-step heuristic, order 8.
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = atol_ + rtol_ * std::abs(y_[i]);
        dnf += (k1_[i] / sk) * (k1_[i] / sk);
        dny += (y_[i] / sk) * (y_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    if (hmax_ > 0.0) h = std::min(h, hmax_);

    std::vector<double> ytry(n_), ktry(n_);
    for (std::size_t i = 0; i < n_; ++i) ytry[i] = y_[i] + dir_ * h * k1_[i];
    rhs_(t_ + dir_ * h, ytry, ktry);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = atol_ + rtol_ * std::abs(y_[i]);
        const double q = (ktry[i] - k1_[i]) / sk;
        der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 > 1e-15 ? std::pow(0.01 / der12, 1.0 / 8.0) : std::max(1e-6, h * 1e-3);
    h = std::min(100.0 * h, h1);
    if (hmax_ > 0.0) h = std::min(h, hmax_);
    return h;
}

double Dop853::step() {
    const std::size_t n = n_;
    while (true) {
        if (!(h_ > std::abs(t_) * 1e-15) || !std::isfinite(h_)) {
            std::ostringstream msg;
            msg << "step size underflow at t = " << t_ << " (h = " << h_ << ")";
            throw IntegrationError(msg.str());
        }
        const double h = dir_ * h_;
        auto stage = [&](double c, auto&& combine, std::vector<double>& k) {
            for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y_[i] + h * combine(i);
            rhs_(t_ + c * h, ytmp_, k);
        };
        stage(c2, [&](std::size_t i) { return a21 * k1_[i]; }, k2_);
        stage(c3, [&](std::size_t i) { return a31 * k1_[i] + a32 * k2_[i]; }, k3_);
        stage(c4, [&](std::size_t i) { return a41 * k1_[i] + a43 * k3_[i]; }, k4_);
        stage(c5, [&](std::size_t i) { return a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]; }, k5_);
        stage(c6, [&](std::size_t i) { return a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]; }, k6_);
        stage(c7,
              [&](std::size_t i) {
                  return a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i];
              },
              k7_);
        stage(c8,
              [&](std::size_t i) {
                  return a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i];
              },
              k8_);
        stage(c9,
              [&](std::size_t i) {
                  return a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] +
                         a98 * k8_[i];
              },
              k9_);
        stage(c10,
              [&](std::size_t i) {
                  return a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] +
                         a107 * k7_[i] + a108 * k8_[i] + a109 * k9_[i];
              },
              k10_);
        stage(c11,
              [&](std::size_t i) {
                  return a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] +
                         a117 * k7_[i] + a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i];
              },
              k2_);
        stage(1.0,
              [&](std::size_t i) {
                  return a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] +
                         a127 * k7_[i] + a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] +
                         a1211 * k2_[i];
              },
              k3_);
        for (std::size_t i = 0; i < n; ++i) {
            k4_[i] = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] +
                     b10 * k10_[i] + b11 * k2_[i] + b12 * k3_[i];
            ynew_[i] = y_[i] + h * k4_[i];
        }

        double err = 0.0, err2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            double e = (k4_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i]) / sk;
            err2 += e * e;
            e = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
                 er10 * k10_[i] + er11 * k2_[i] + er12 * k3_[i]) /
                sk;
            err += e * e;
        }
        double deno = err + 0.01 * err2;
        if (deno <= 0.0) deno = 1.0;
        err *= h_ / std::sqrt(deno * static_cast<double>(n));
        if (!std::isfinite(err)) err = 1e10;

        double fac = std::pow(err, 1.0 / 8.0);
        fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafety));

        if (err <= 1.0) {
            rhs_(t_ + h, ynew_, k4_);
            for (std::size_t i = 0; i < n; ++i) {
                r1_[i] = y_[i];
                const double ydiff = ynew_[i] - y_[i];
                r2_[i] = ydiff;
                const double bspl = h * k1_[i] - ydiff;
                r3_[i] = bspl;
                r4_[i] = ydiff - h * k4_[i] - bspl;
                r5_[i] = h * (d41 * k1_[i] + d46 * k6_[i] + d47 * k7_[i] + d48 * k8_[i] +
                              d49 * k9_[i] + d410 * k10_[i] + d411 * k2_[i] + d412 * k3_[i] +
                              d413 * k4_[i]);
                r6_[i] = h * (d51 * k1_[i] + d56 * k6_[i] + d57 * k7_[i] + d58 * k8_[i] +
                              d59 * k9_[i] + d510 * k10_[i] + d511 * k2_[i] + d512 * k3_[i] +
                              d513 * k4_[i]);
                r7_[i] = h * (d61 * k1_[i] + d66 * k6_[i] + d67 * k7_[i] + d68 * k8_[i] +
                              d69 * k9_[i] + d610 * k10_[i] + d611 * k2_[i] + d612 * k3_[i] +
                              d613 * k4_[i]);
                r8_[i] = h * (d71 * k1_[i] + d76 * k6_[i] + d77 * k7_[i] + d78 * k8_[i] +
                              d79 * k9_[i] + d710 * k10_[i] + d711 * k2_[i]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(ynew_[i])) {
                    throw IntegrationError("integrator produced a non-finite state");
                }
            }
            std::swap(k1_, k4_);
            std::swap(y_, ynew_);
            t_prev_ = t_;
            t_ += h;
            h_ /= fac;
            if (hmax_ > 0.0) h_ = std::min(h_, hmax_);
            ++accepted_;
            return h;
        }
        h_ /= std::min(1.0 / kFacMin, fac / kSafety);
    }
}

void Dop853::dense(double t, std::span<double> out) const {
    if (t == t_) {
        std::copy(y_.begin(), y_.end(), out.begin());
        return;
    }
    const double span = t_ - t_prev_;
    if (span == 0.0) {
        std::copy(y_.begin(), y_.end(), out.begin());
        return;
    }
    const double s = (t - t_prev_) / span;
    const double s1 = 1.0 - s;
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = r1_[i] +
                 s * (r2_[i] +
                      s1 * (r3_[i] +
                            s * (r4_[i] +
                                 s1 * (r5_[i] + s * (r6_[i] + s1 * (r7_[i] + s * r8_[i]))))));
    }
}

void integrate_on_grid(Dop853& solver, double t0, std::span<const double> y0, double t_end,
                       double dt,
                       const std::function<void(double, std::span<const double>)>& sink) {
    if (!(dt > 0.0)) throw ValidationError("sample interval must be positive");
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    solver.init(t0, y0, dir);
    sink(t0, y0);
    if (t_end == t0) return;

    const double span = std::abs(t_end - t0);
    // Grid points are t0 + k dt; the final point is t_end even when it is
    // not a multiple of dt. Points closer than dt*1e-9 to t_end are merged.
    const auto count = static_cast<long long>(std::floor(span / dt * (1.0 + 1e-12)));
    long long next = 1;
    std::vector<double> buf(y0.size());
    auto grid_time = [&](long long k) {
        if (k > count) return t_end;
        const double t = t0 + dir * static_cast<double>(k) * dt;
        return std::abs(t_end - t) <= dt * 1e-9 ? t_end : t;
    };
    const long long last = (std::abs(t_end - grid_time(count)) == 0.0) ? count : count + 1;
    while (next <= last) {
        solver.step();
        while (next <= last) {
            const double tg = grid_time(next);
            if (dir * (tg - solver.time()) > 0.0) break;
            solver.dense(tg, buf);
            sink(tg, buf);
            ++next;
        }
    }
}

}  // namespace kovtop

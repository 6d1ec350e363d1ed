#pragma once

// Scalar-generic formulas shared by the double-valued public API and the
// jet-valued gradients used by the bracket engine. Layout of `u` is
// (omega1..3, alpha1..3, beta1..3).

#include <array>
#include <cmath>

#include "kovtop/detail/jet.hpp"
#include "kovtop/mutation.hpp"
#include "kovtop/statespace.hpp"

namespace kovtop::detail {

template <typename T>
using Phase = std::array<T, 9>;

template <typename T>
T hamiltonian(const Phase<T>& u) {
    return u[0] * u[0] + u[1] * u[1] + 0.5 * (u[2] * u[2]) - (u[3] + u[7]);
}

template <typename T>
T kovalevskaya_z1(const Phase<T>& u) {
    return u[0] * u[0] - u[1] * u[1] + u[3] - u[7];
}

template <typename T>
T kovalevskaya_z2(const Phase<T>& u) {
    return 2.0 * (u[0] * u[1]) + u[4] + u[6];
}

template <typename T>
T kovalevskaya_k(const Phase<T>& u) {
    const T z1 = kovalevskaya_z1(u);
    const T z2 = kovalevskaya_z2(u);
    return z1 * z1 + z2 * z2;
}

template <typename T>
struct AuxOmegas {
    T alpha;
    T beta;
    T gamma;
};

template <typename T>
AuxOmegas<T> aux_omegas(const Phase<T>& u) {
    const T& w1 = u[0];
    const T& w2 = u[1];
    const T& w3 = u[2];
    const T& a1 = u[3];
    const T& a2 = u[4];
    const T& a3 = u[5];
    const T& b1 = u[6];
    const T& b2 = u[7];
    const T& b3 = u[8];
    return {2.0 * (w1 * a1) + 2.0 * (w2 * a2) + w3 * a3,
            2.0 * (w1 * b1) + 2.0 * (w2 * b2) + w3 * b3,
            2.0 * (w1 * (a2 * b3 - a3 * b2)) + 2.0 * (w2 * (a3 * b1 - a1 * b3)) +
                w3 * (a1 * b2 - a2 * b1)};
}

template <typename T>
T integral_g(const Phase<T>& u, const BodyParams& p) {
    const auto aux = aux_omegas(u);
    return 0.25 * (aux.alpha * aux.alpha + aux.beta * aux.beta) + 0.5 * (u[2] * aux.gamma) -
           (p.b * p.b) * u[3] - (p.a * p.a) * u[7];
}

/// 2G - p^2 H, the combination behind F and M.
template <typename T>
T shifted_g(const Phase<T>& u, const BodyParams& p) {
    return 2.0 * integral_g(u, p) - p.p2 * hamiltonian(u);
}

template <typename T>
T integral_f(const Phase<T>& u, const BodyParams& p) {
    const T q = shifted_g(u, p);
    return q * q - p.r4() * kovalevskaya_k(u);
}

template <typename T>
T integral_m(const Phase<T>& u, const BodyParams& p) {
    return shifted_g(u, p) / p.r4();
}

/// Radicand of L: 2 p^2 M^2 + 2 H M + 1.
template <typename T>
T l_radicand(const Phase<T>& u, const BodyParams& p) {
    const T m = integral_m(u, p);
    return 2.0 * p.p2 * (m * m) + 2.0 * (hamiltonian(u) * m) + 1.0;
}

template <typename T>
struct Chart {
    Complex<T> x1, x2, y1, y2, z1, z2, w1, w2;
    T w3;
};

template <typename T>
Chart<T> make_chart(const Phase<T>& u) {
    Chart<T> c;
    c.x1 = {u[3] - u[7], u[4] + u[6]};
    c.y1 = {u[3] + u[7], u[4] - u[6]};
    c.z1 = {u[5], u[8]};
    c.w1 = {u[0], u[1]};
    c.x2 = conj(c.x1);
    c.y2 = conj(c.y1);
    c.z2 = conj(c.z1);
    c.w2 = conj(c.w1);
    c.w3 = u[2];
    return c;
}

/// x1 x2 taken as a real number (its imaginary part vanishes on real charts).
template <typename T>
T chart_x1x2(const Chart<T>& c) {
    return (c.x1 * c.x2).re;
}

template <typename T>
Complex<T> f1_value(const Chart<T>& c) {
    using std::sqrt;
    const T root = sqrt(chart_x1x2(c));
    const Complex<T> cross = c.x2 * c.z1 * c.w1 + c.x1 * c.z2 * c.w2;
    return Complex<T>(root * c.w3) - cross / Complex<T>(root);
}

template <typename T>
Complex<T> f2_value(const Chart<T>& c) {
    const Mutation mut = active_mutation();
    const double shift1 = mut == Mutation::f2_first_shift ? -1.0 : 1.0;
    const double shift2 = mut == Mutation::f2_second_shift ? -1.0 : 1.0;
    const double between = mut == Mutation::f2_difference ? 1.0 : -1.0;
    const double half = mut == Mutation::f2_prefactor ? -0.5 : 0.5;

    const Complex<T> first = (c.x2 / c.x1) * (c.w1 * c.w1 + Complex<T>(shift1) * c.x1);
    const Complex<T> second = (c.x1 / c.x2) * (c.w2 * c.w2 + Complex<T>(shift2) * c.x2);
    const Complex<T> bracket = first + Complex<T>(between) * second;
    return Complex<T>(T(0.0), T(half)) * bracket;
}

}  // namespace kovtop::detail

#pragma once

// Forward-mode derivative carrier over the nine phase coordinates, plus a
// small complex type that works for any real scalar (std::complex is only
// specified for the built-in floating types).

#include <array>
#include <cmath>

namespace kovtop::detail {

struct Jet {
    double v = 0.0;
    std::array<double, 9> d{};

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

    static Jet variable(double value, int index) {
        Jet j(value);
        j.d[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    Jet& operator+=(const Jet& o) {
        v += o.v;
        for (int i = 0; i < 9; ++i) d[i] += o.d[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        for (int i = 0; i < 9; ++i) d[i] -= o.d[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        for (int i = 0; i < 9; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        const double inv = 1.0 / o.v;
        for (int i = 0; i < 9; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
        v *= inv;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
    friend Jet operator-(Jet a) {
        a.v = -a.v;
        for (auto& x : a.d) x = -x;
        return a;
    }
};

inline Jet sqrt(const Jet& x) {
    Jet r(std::sqrt(x.v));
    const double f = 0.5 / r.v;
    for (int i = 0; i < 9; ++i) r.d[i] = f * x.d[i];
    return r;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

template <typename T>
struct Complex {
    T re{};
    T im{};

    Complex() = default;
    Complex(T r) : re(r), im(0.0) {}  // NOLINT(google-explicit-constructor)
    Complex(T r, T i) : re(r), im(i) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        const T den = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
};

template <typename T>
Complex<T> conj(const Complex<T>& z) {
    return {z.re, -z.im};
}

}  // namespace kovtop::detail

#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdlib>
#include <string>

namespace sobmom {

/// Exact complex number with Gaussian-rational coordinates.
/// All arithmetic is exact; no rounding ever happens on this type.
struct RatComplex {
    mpq_class re, im;

    RatComplex() : re(0), im(0) {}
    RatComplex(long v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
    RatComplex(mpq_class r) : re(std::move(r)), im(0) {}  // NOLINT
    RatComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    RatComplex& operator+=(const RatComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RatComplex& operator-=(const RatComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    RatComplex& operator*=(const RatComplex& o) {
        mpq_class r = re * o.re - im * o.im;
        mpq_class i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    RatComplex& operator/=(const RatComplex& o) {
        mpq_class d = o.re * o.re + o.im * o.im;
        if (d == 0) throw std::domain_error("RatComplex: division by zero");
        mpq_class r = (re * o.re + im * o.im) / d;
        mpq_class i = (im * o.re - re * o.im) / d;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
};

inline RatComplex operator+(RatComplex a, const RatComplex& b) { return a += b; }
inline RatComplex operator-(RatComplex a, const RatComplex& b) { return a -= b; }
inline RatComplex operator*(RatComplex a, const RatComplex& b) { return a *= b; }
inline RatComplex operator/(RatComplex a, const RatComplex& b) { return a /= b; }
inline RatComplex operator-(const RatComplex& a) { return {-a.re, -a.im}; }
inline bool operator==(const RatComplex& a, const RatComplex& b) {
    return a.re == b.re && a.im == b.im;
}
inline bool operator!=(const RatComplex& a, const RatComplex& b) { return !(a == b); }

using FloatComplex = std::complex<double>;

/// Scalar backend traits. Two instantiations exist: the exact
/// Gaussian-rational field and double-precision complex.
template <class S>
struct field;

template <>
struct field<RatComplex> {
    using scalar_t = RatComplex;
    using real_t = mpq_class;
    static constexpr bool exact = true;
    static const char* name() { return "rational"; }

    static RatComplex zero() { return {}; }
    static RatComplex one() { return {1}; }
    static RatComplex from_int(long v) { return {v}; }
    static RatComplex from_mpz(const mpz_class& v) { return {mpq_class(v)}; }
    static RatComplex from_real(const mpq_class& v) { return {v}; }
    static RatComplex make(const mpq_class& r, const mpq_class& i) { return {r, i}; }

    static RatComplex conj(const RatComplex& z) { return {z.re, -z.im}; }
    static bool is_zero(const RatComplex& z) { return z.re == 0 && z.im == 0; }
    static bool is_real(const RatComplex& z) { return z.im == 0; }
    static mpq_class re(const RatComplex& z) { return z.re; }
    static mpq_class im(const RatComplex& z) { return z.im; }
    static mpq_class abs2(const RatComplex& z) { return z.re * z.re + z.im * z.im; }
    static std::complex<double> to_cd(const RatComplex& z) {
        return {z.re.get_d(), z.im.get_d()};
    }
    static double abs_approx(const RatComplex& z) { return std::abs(to_cd(z)); }
    static double real_to_double(const mpq_class& v) { return v.get_d(); }
};

template <>
struct field<FloatComplex> {
    using scalar_t = FloatComplex;
    using real_t = double;
    static constexpr bool exact = false;
    static const char* name() { return "complex64"; }

    static FloatComplex zero() { return {0.0, 0.0}; }
    static FloatComplex one() { return {1.0, 0.0}; }
    static FloatComplex from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static FloatComplex from_mpz(const mpz_class& v) { return {v.get_d(), 0.0}; }
    static FloatComplex from_real(double v) { return {v, 0.0}; }
    static FloatComplex make(double r, double i) { return {r, i}; }

    static FloatComplex conj(const FloatComplex& z) { return std::conj(z); }
    static bool is_zero(const FloatComplex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
    static bool is_real(const FloatComplex& z) { return z.imag() == 0.0; }
    static double re(const FloatComplex& z) { return z.real(); }
    static double im(const FloatComplex& z) { return z.imag(); }
    static double abs2(const FloatComplex& z) { return std::norm(z); }
    static std::complex<double> to_cd(const FloatComplex& z) { return z; }
    static double abs_approx(const FloatComplex& z) { return std::abs(z); }
    static double real_to_double(double v) { return v; }
};

template <class S>
S scalar_conj(const S& z) {
    return field<S>::conj(z);
}

}  // namespace sobmom

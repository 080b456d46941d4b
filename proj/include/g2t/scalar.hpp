#pragma once
#include <gmpxx.h>

#include <complex>
#include <cmath>
#include <string>

namespace g2t {

using cplx = std::complex<double>;

// Gaussian rational a + b i with a, b in Q.
struct QI {
    mpq_class re, im;

    QI() : re(0), im(0) {}
    QI(long r) : re(r), im(0) {}
    QI(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
    static QI frac(long num, long den) { mpq_class q(num, den); q.canonicalize(); return QI(q); }
    static QI unit_i() { return QI(mpq_class(0), mpq_class(1)); }

    QI& operator+=(const QI& o) { re += o.re; im += o.im; return *this; }
    QI& operator-=(const QI& o) { re -= o.re; im -= o.im; return *this; }
    QI& operator*=(const QI& o) {
        mpq_class r = re * o.re - im * o.im;
        mpq_class i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    QI& operator/=(const QI& o) {
        mpq_class d = o.re * o.re + o.im * o.im;
        mpq_class r = (re * o.re + im * o.im) / d;
        mpq_class i = (im * o.re - re * o.im) / d;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend QI operator+(QI a, const QI& b) { return a += b; }
    friend QI operator-(QI a, const QI& b) { return a -= b; }
    friend QI operator*(QI a, const QI& b) { return a *= b; }
    friend QI operator/(QI a, const QI& b) { return a /= b; }
    friend QI operator-(const QI& a) { return QI(mpq_class(-a.re), mpq_class(-a.im)); }
    friend bool operator==(const QI& a, const QI& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QI& a, const QI& b) { return !(a == b); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    cplx to_cplx() const { return {re.get_d(), im.get_d()}; }
    std::string str() const;
};

inline QI sconj(const QI& x) { return QI(x.re, mpq_class(-x.im)); }
inline cplx sconj(const cplx& x) { return std::conj(x); }

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
    static constexpr bool exact = false;
    static cplx zero() { return 0.0; }
    static cplx one() { return 1.0; }
    static cplx i() { return {0.0, 1.0}; }
    static cplx from_int(long n) { return double(n); }
    static cplx from_qi(const QI& q) { return q.to_cplx(); }
    static double mag(const cplx& x) { return std::abs(x); }
    static bool is_zero(const cplx& x, double tol) { return std::abs(x) <= tol; }
    static cplx to_cplx(const cplx& x) { return x; }
};

template <>
struct scalar_traits<QI> {
    static constexpr bool exact = true;
    static QI zero() { return QI(); }
    static QI one() { return QI(1); }
    static QI i() { return QI::unit_i(); }
    static QI from_int(long n) { return QI(n); }
    static QI from_qi(const QI& q) { return q; }
    static double mag(const QI& x) { return std::abs(x.to_cplx()); }
    static bool is_zero(const QI& x, double) { return x.is_zero(); }
    static cplx to_cplx(const QI& x) { return x.to_cplx(); }
};

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

}  // namespace g2t

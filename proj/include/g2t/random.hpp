#pragma once
#include "g2t/algebra.hpp"

#include <random>

namespace g2t {

using Rng = std::mt19937_64;

inline mpq_class random_rational(Rng& rng, int bound = 9, int max_den = 7) {
    std::uniform_int_distribution<int> num(-bound, bound), den(1, max_den);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline QI random_qi(Rng& rng, bool real = false) {
    return real ? QI(random_rational(rng)) : QI(random_rational(rng), random_rational(rng));
}

template <class T>
T random_scalar(Rng& rng, bool real = false) {
    if constexpr (is_exact_v<T>) {
        return random_qi(rng, real);
    } else {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        return real ? T(d(rng)) : T(d(rng), d(rng));
    }
}

template <class T>
Vec7<T> random_vec(Rng& rng, bool real = false) {
    Vec7<T> v;
    for (int k = 0; k < 7; ++k) v[k] = random_scalar<T>(rng, real);
    return v;
}

// Rational orthogonal matrix (I − S)(I + S)⁻¹ from a random skew matrix S.
inline Mat<QI> cayley_orthogonal(Rng& rng, int n) {
    Mat<QI> S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            S(i, j) = QI(random_rational(rng, 3, 3));
            S(j, i) = -S(i, j);
        }
    Mat<QI> I = Mat<QI>::identity(n);
    return (I - S) * inverse(I + S);
}

// A rational element of G₂ sending e₁,e₂,e₄ to a random associative-compatible triple.
// The image of (e₁, e₂, e₄) under g determines g: g e₃ = g e₁ × g e₂, etc.
inline Mat<QI> g2_from_triple(const Vec7<QI>& a, const Vec7<QI>& b, const Vec7<QI>& c) {
    Mat<QI> g(7, 7);
    std::array<Vec7<QI>, 7> img;
    img[0] = a;
    img[1] = b;
    img[2] = cross(a, b);
    img[3] = c;
    img[4] = cross(a, c);
    img[5] = cross(b, c);
    img[6] = cross(img[2], c);
    for (int j = 0; j < 7; ++j)
        for (int i = 0; i < 7; ++i) g(i, j) = img[j][i];
    return g;
}

// Random rational G₂ element. a, b are columns of a rational orthogonal Q; c is a rational
// unit vector in span{a,b,a×b}⊥ obtained from a rational reflection inside span(q₂..q₆).
inline Mat<QI> random_g2_rational(Rng& rng) {
    Mat<QI> Q = cayley_orthogonal(rng, 7);
    auto col = [&](int j) { return Vec7<QI>::from(Q.col(j)); };
    Vec7<QI> a = col(0), b = col(1), ab = cross(a, b);
    std::array<QI, 5> x, v;
    for (int j = 0; j < 5; ++j) x[j] = dot(ab, col(2 + j));
    QI vv(0);
    for (int j = 0; j < 5; ++j) {
        v[j] = (j == 0 ? QI(1) : QI(0)) - x[j];
        vv += v[j] * v[j];
    }
    std::array<QI, 5> r;
    for (int j = 0; j < 5; ++j) r[j] = (j == 1 ? QI(1) : QI(0));
    if (!vv.is_zero())
        for (int j = 0; j < 5; ++j) r[j] -= QI(2) * v[j] * v[1] / vv;
    Vec7<QI> c;
    for (int j = 0; j < 5; ++j) c += r[j] * col(2 + j);
    return g2_from_triple(a, b, c);
}

template <class T>
Vec7<T> apply(const Mat<T>& g, const Vec7<T>& v) {
    return Vec7<T>::from(g.apply(v.vec()));
}

}  // namespace g2t

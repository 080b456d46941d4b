#pragma once
#include "g2t/bundles.hpp"
#include "g2t/twistor.hpp"
#include "g2t/random.hpp"
#include "oracle.hpp"

namespace fx {

using namespace g2t;

// Random polynomial frame: 7 × k entries of total degree ≤ deg in z, z̄.
inline oracle::PolyMatrix random_poly_frame(Rng& rng, int k, int deg, bool holomorphic = false) {
    oracle::PolyMatrix m(7, std::vector<oracle::Poly>(k));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < k; ++j)
            for (int d = 0; d <= deg; ++d)
                for (int q = 0; q <= (holomorphic ? 0 : d); ++q) {
                    QI c(random_rational(rng, 3, 1), random_rational(rng, 3, 1));
                    if (!c.is_zero()) m[i][j].c[{d - q, q}] = c;
                }
    return m;
}

template <class T>
JetMatrix<T> to_jets(const oracle::PolyMatrix& m, int order) {
    JetMatrix<T> J(int(m.size()), int(m[0].size()), order);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[0].size(); ++j)
            for (auto& [k, v] : m[i][j].c)
                if (k.first + k.second <= order) J(int(i), int(j)).at(k.first, k.second) = scalar_traits<T>::from_qi(v);
    return J;
}

// Null curve (1 − w², i(1 + w²), 2w, 0, 0, 0, 0), isotropic for any jet w.
template <class T>
JetVec7<T> null_curve(const Jet<T>& w) {
    const int n = w.order();
    JetVec7<T> v(n);
    Jet<T> one = Jet<T>::constant(scalar_traits<T>::one(), n);
    Jet<T> w2 = w * w;
    v[0] = one - w2;
    v[1] = scalar_traits<T>::i() * (one + w2);
    v[2] = T(2) * w;
    return v;
}

inline QI small_gaussian(Rng& rng, int bound = 2) {
    std::uniform_int_distribution<int> d(-bound, bound);
    QI c;
    while (c.is_zero()) c = QI(mpq_class(d(rng)), mpq_class(d(rng)));
    return c;
}

// Constant element of complex G₂: a rational rotation in G₂ times exp(c E_β) over `factors` random roots.
template <class T>
Mat<T> random_g2c(Rng& rng, int factors = 12) {
    Mat<T> g = convert_mat<T>(random_g2_rational(rng));
    std::uniform_int_distribution<size_t> pick(0, roots().size() - 1);
    for (int k = 0; k < factors; ++k)
        g = g * exp_nilpotent(convert_mat<T>(small_gaussian(rng, 1) * root_vector(roots()[pick(rng)])));
    return g;
}

// g₀ exp(z E) with E a generic combination of the grade-one root vectors for s, plus `extra` roots.
template <class T>
JetMatrix<T> g2c_curve(Rng& rng, int s, int order, const std::vector<Weight>& extra = {}, int factors = 12) {
    Mat<QI> E(7, 7);
    for (auto& r : grade_one_roots(s)) E = E + small_gaussian(rng) * root_vector(r);
    for (auto& r : extra) E = E + small_gaussian(rng) * root_vector(r);
    return JetMatrix<T>::constant(random_g2c<T>(rng, factors), order) * jet_exp_nilpotent(convert_mat<T>(E), order);
}

}  // namespace fx

#pragma once
// Brute-force reference implementations used only by tests. Nothing here shares code with
// the library beyond the scalar type.
#include "g2t/scalar.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace oracle {

using g2t::QI;

// Cayley-Dickson doubling on coefficient vectors of length 2^n, starting from the reals.
inline std::vector<QI> cd_conj(const std::vector<QI>& x) {
    std::vector<QI> r(x.size());
    r[0] = x[0];
    for (size_t k = 1; k < x.size(); ++k) r[k] = -x[k];
    return r;
}

inline std::vector<QI> cd_mul(const std::vector<QI>& x, const std::vector<QI>& y) {
    const size_t n = x.size();
    if (n == 1) return {x[0] * y[0]};
    const size_t h = n / 2;
    std::vector<QI> a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
    std::vector<QI> c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
    auto ac = cd_mul(a, c), db = cd_mul(cd_conj(d), b);
    auto da = cd_mul(d, a), bc = cd_mul(b, cd_conj(c));
    std::vector<QI> r(n);
    for (size_t k = 0; k < h; ++k) {
        r[k] = ac[k] - db[k];
        r[h + k] = da[k] + bc[k];
    }
    return r;
}

// Imaginary vector (7 entries) to an octonion with zero real part, and back.
inline std::vector<QI> imag(const std::vector<QI>& v) {
    std::vector<QI> o(8);
    for (int k = 0; k < 7; ++k) o[k + 1] = v[k];
    return o;
}

inline std::vector<QI> cross(const std::vector<QI>& u, const std::vector<QI>& v) {
    auto p = cd_mul(imag(u), imag(v));
    return std::vector<QI>(p.begin() + 1, p.end());
}

inline QI dot(const std::vector<QI>& u, const std::vector<QI>& v) {
    auto p = cd_mul(imag(u), imag(v));
    return -p[0];
}

inline std::vector<QI> associator(const std::vector<QI>& u, const std::vector<QI>& v, const std::vector<QI>& w) {
    auto U = imag(u), V = imag(v), W = imag(w);
    auto l = cd_mul(cd_mul(U, V), W), r = cd_mul(U, cd_mul(V, W));
    std::vector<QI> out(7);
    for (int k = 0; k < 7; ++k) out[k] = l[k + 1] - r[k + 1];
    return out;
}

using Matrix = std::vector<std::vector<QI>>;

// Fraction-free (Bareiss) elimination rank.
inline int rank(Matrix m) {
    const int rows = int(m.size());
    if (rows == 0) return 0;
    const int cols = int(m[0].size());
    QI prev(1);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            m[i][c] = QI(0);
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

// Basis of {x : m x = 0} from the reduced row echelon form.
inline Matrix nullspace(Matrix m, int cols) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < int(m.size()); ++c) {
        int p = -1;
        for (int i = r; i < int(m.size()); ++i)
            if (!m[i][c].is_zero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        QI inv = QI(1) / m[r][c];
        for (auto& x : m[r]) x = x * inv;
        for (int i = 0; i < int(m.size()); ++i)
            if (i != r && !m[i][c].is_zero()) {
                QI f = m[i][c];
                for (int j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
            }
        pivots.push_back(c);
        ++r;
    }
    Matrix basis;
    for (int fcol = 0; fcol < cols; ++fcol) {
        if (std::find(pivots.begin(), pivots.end(), fcol) != pivots.end()) continue;
        std::vector<QI> x(cols);
        x[fcol] = QI(1);
        for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -m[k][fcol];
        basis.push_back(x);
    }
    return basis;
}

inline QI det(const Matrix& m) {
    const size_t n = m.size();
    if (n == 0) return QI(1);
    if (n == 1) return m[0][0];
    QI s(0);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        Matrix minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<QI> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        QI t = m[0][j] * det(minor);
        if (j % 2) s -= t;
        else s += t;
    }
    return s;
}

// Inverse via the adjugate.
inline Matrix adjugate_inverse(const Matrix& m) {
    const size_t n = m.size();
    QI d = det(m);
    Matrix inv(n, std::vector<QI>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Matrix minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<QI> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(m[r][c]);
                minor.push_back(row);
            }
            QI cof = det(minor);
            if ((i + j) % 2) cof = -cof;
            inv[i][j] = cof / d;
        }
    return inv;
}


// Sparse bivariate polynomial in z, z̄ with full (untruncated) products.
struct Poly {
    std::map<std::pair<int, int>, QI> c;

    Poly truncated(int n) const {
        Poly r;
        for (auto& [k, v] : c)
            if (k.first + k.second <= n && !v.is_zero()) r.c[k] = v;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ka, va] : a.c)
            for (auto& [kb, vb] : b.c) r.c[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (auto& [k, v] : b.c) r.c[k] += v;
        return r;
    }
    Poly dz() const {
        Poly r;
        for (auto& [k, v] : c)
            if (k.first > 0) r.c[{k.first - 1, k.second}] += QI(k.first) * v;
        return r;
    }
    Poly dzbar() const {
        Poly r;
        for (auto& [k, v] : c)
            if (k.second > 0) r.c[{k.first, k.second - 1}] += QI(k.second) * v;
        return r;
    }
    QI at(int p, int q) const {
        auto it = c.find({p, q});
        return it == c.end() ? QI(0) : it->second;
    }
};


inline Poly conj(const Poly& a) {
    Poly r;
    for (auto& [k, v] : a.c) r.c[{k.second, k.first}] = g2t::sconj(v);
    return r;
}

using PolyMatrix = std::vector<std::vector<Poly>>;

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    Matrix r(a.size(), std::vector<QI>(b[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k)
            for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}
inline Matrix mat_adj(const Matrix& a) {
    Matrix r(a[0].size(), std::vector<QI>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = g2t::sconj(a[i][j]);
    return r;
}
inline Matrix coeff(const PolyMatrix& m, int p, int q) {
    Matrix r(m.size(), std::vector<QI>(m[0].size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[0].size(); ++j) r[i][j] = m[i][j].at(p, q);
    return r;
}
inline Matrix mat_add(Matrix a, const Matrix& b, QI s = QI(1)) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) a[i][j] += s * b[i][j];
    return a;
}

// A_z at the base point for the span of the columns of S (7 × k polynomial frame),
// from P = S G⁻¹ S† and ∂G⁻¹ = −G⁻¹ (∂G) G⁻¹, with the adjugate inverse.
inline Matrix az_at_base(const PolyMatrix& S) {
    Matrix S0 = coeff(S, 0, 0);
    Matrix Sz = coeff(S, 1, 0);   // ∂_z S at 0
    Matrix Szb = coeff(S, 0, 1);  // ∂_z̄ S at 0
    Matrix S0h = mat_adj(S0);
    Matrix dSh = mat_adj(Szb);    // ∂_z (S†) = (∂_z̄ S)†
    Matrix G0 = mat_mul(S0h, S0);
    Matrix dG = mat_add(mat_mul(dSh, S0), mat_mul(S0h, Sz));
    Matrix Gi = adjugate_inverse(G0);
    Matrix dGi = mat_mul(mat_mul(Gi, dG), Gi);
    Matrix P0 = mat_mul(mat_mul(S0, Gi), S0h);
    Matrix dP = mat_add(mat_add(mat_mul(mat_mul(Sz, Gi), S0h), mat_mul(mat_mul(S0, dGi), S0h), QI(-1)),
                        mat_mul(mat_mul(S0, Gi), dSh));
    Matrix R = P0;
    for (size_t i = 0; i < R.size(); ++i) {
        for (auto& x : R[i]) x = QI(2) * x;
        R[i][i] -= QI(1);
    }
    return mat_mul(R, dP);
}

}  // namespace oracle

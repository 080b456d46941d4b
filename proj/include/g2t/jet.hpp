#pragma once
#include "g2t/algebra.hpp"

#include <stdexcept>
#include <vector>

namespace g2t {

struct JetOrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Σ_{p+q≤N} c_{pq} z^p z̄^q, coefficients stored by total degree then q.
template <class T>
class Jet {
public:
    Jet() : Jet(0) {}
    explicit Jet(int order) : n_(order), c_(size_for(order), scalar_traits<T>::zero()) {
        if (order < 0) throw JetOrderError("Jet: negative order");
    }

    static size_t size_for(int n) { return size_t(n + 1) * (n + 2) / 2; }
    static size_t index(int p, int q) { int d = p + q; return size_t(d) * (d + 1) / 2 + q; }

    static Jet constant(const T& c, int order) { Jet j(order); j.c_[0] = c; return j; }
    static Jet z(int order) { Jet j(order); if (order >= 1) j.at(1, 0) = scalar_traits<T>::one(); return j; }
    static Jet zbar(int order) { Jet j(order); if (order >= 1) j.at(0, 1) = scalar_traits<T>::one(); return j; }

    int order() const { return n_; }
    T& at(int p, int q) { return c_[index(p, q)]; }
    const T& at(int p, int q) const { return c_[index(p, q)]; }
    const T& eval0() const { return c_[0]; }

    Jet truncated(int m) const {
        if (m > n_) throw JetOrderError("Jet: cannot raise order by truncation");
        Jet j(m);
        std::copy(c_.begin(), c_.begin() + size_for(m), j.c_.begin());
        return j;
    }

    Jet& operator+=(const Jet& o) { add(o, false); return *this; }
    Jet& operator-=(const Jet& o) { add(o, true); return *this; }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) { for (auto& x : a.c_) x = -x; return a; }
    friend Jet operator*(const T& s, Jet a) { for (auto& x : a.c_) x *= s; return a; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const int n = std::min(a.n_, b.n_);
        Jet r(n);
        for (int d1 = 0; d1 <= n; ++d1)
            for (int q1 = 0; q1 <= d1; ++q1) {
                const T& x = a.at(d1 - q1, q1);
                if (scalar_traits<T>::is_zero(x, 0.0)) continue;
                for (int d2 = 0; d1 + d2 <= n; ++d2)
                    for (int q2 = 0; q2 <= d2; ++q2) r.at(d1 - q1 + d2 - q2, q1 + q2) += x * b.at(d2 - q2, q2);
            }
        return r;
    }

    friend Jet dz(const Jet& a) {
        if (a.n_ == 0) throw JetOrderError("dz: derivative of an order-0 jet");
        Jet r(a.n_ - 1);
        for (int d = 0; d < a.n_; ++d)
            for (int q = 0; q <= d; ++q) {
                int p = d - q;
                r.at(p, q) = T(p + 1) * a.at(p + 1, q);
            }
        return r;
    }
    friend Jet dzbar(const Jet& a) {
        if (a.n_ == 0) throw JetOrderError("dzbar: derivative of an order-0 jet");
        Jet r(a.n_ - 1);
        for (int d = 0; d < a.n_; ++d)
            for (int q = 0; q <= d; ++q) {
                int p = d - q;
                r.at(p, q) = T(q + 1) * a.at(p, q + 1);
            }
        return r;
    }
    friend Jet conj(const Jet& a) {
        Jet r(a.n_);
        for (int d = 0; d <= a.n_; ++d)
            for (int q = 0; q <= d; ++q) r.at(q, d - q) = sconj(a.at(d - q, q));
        return r;
    }

    // Antiderivative in z̄ vanishing on z̄ = 0; one order higher.
    friend Jet integrate_zbar(const Jet& a) {
        Jet r(a.n_ + 1);
        for (int d = 0; d <= a.n_; ++d)
            for (int q = 0; q <= d; ++q) {
                int p = d - q;
                r.at(p, q + 1) = a.at(p, q) / T(q + 1);
            }
        return r;
    }

    Jet inverse() const {
        if (scalar_traits<T>::is_zero(c_[0], 0.0)) throw std::domain_error("Jet::inverse: zero constant term");
        Jet r(n_);
        T inv0 = scalar_traits<T>::one() / c_[0];
        r.c_[0] = inv0;
        for (int d = 1; d <= n_; ++d)
            for (int q = 0; q <= d; ++q) {
                int p = d - q;
                T s = scalar_traits<T>::zero();
                for (int p1 = 0; p1 <= p; ++p1)
                    for (int q1 = 0; q1 <= q; ++q1) {
                        if (p1 == 0 && q1 == 0) continue;
                        s += at(p1, q1) * r.at(p - p1, q - q1);
                    }
                r.at(p, q) = -(inv0 * s);
            }
        return r;
    }

    double max_abs() const {
        double m = 0;
        for (auto& x : c_) m = std::max(m, scalar_traits<T>::mag(x));
        return m;
    }
    bool is_zero(double tol = kDefaultTol) const {
        for (auto& x : c_)
            if (!scalar_traits<T>::is_zero(x, tol)) return false;
        return true;
    }
    bool is_holomorphic(double tol = kDefaultTol) const {
        for (int d = 1; d <= n_; ++d)
            for (int q = 1; q <= d; ++q)
                if (!scalar_traits<T>::is_zero(at(d - q, q), tol)) return false;
        return true;
    }
    // Value of the truncated polynomial at a point (float only).
    cplx eval(cplx z) const {
        cplx s = 0, zb = std::conj(z);
        for (int d = 0; d <= n_; ++d)
            for (int q = 0; q <= d; ++q)
                s += scalar_traits<T>::to_cplx(at(d - q, q)) * std::pow(z, d - q) * std::pow(zb, q);
        return s;
    }

private:
    void add(const Jet& o, bool sub) {
        if (o.n_ < n_) { *this = truncated(o.n_); }
        for (size_t k = 0; k < c_.size(); ++k) {
            if (sub) c_[k] -= o.c_[k];
            else c_[k] += o.c_[k];
        }
    }
    int n_;
    std::vector<T> c_;
};

template <class T, class U>
Jet<T> convert_jet(const Jet<U>& a) {
    Jet<T> r(a.order());
    for (int d = 0; d <= a.order(); ++d)
        for (int q = 0; q <= d; ++q) {
            if constexpr (std::is_same_v<U, QI>) r.at(d - q, q) = scalar_traits<T>::from_qi(a.at(d - q, q));
            else r.at(d - q, q) = T(a.at(d - q, q));
        }
    return r;
}

// exp(μz + νz̄): coefficients μ^p ν^q / (p! q!).
template <class T>
Jet<T> jet_exp_linear(const T& mu, const T& nu, int order) {
    Jet<T> r(order);
    std::vector<T> mp(order + 1), np(order + 1);
    mp[0] = np[0] = scalar_traits<T>::one();
    for (int k = 1; k <= order; ++k) {
        mp[k] = mp[k - 1] * mu / T(k);
        np[k] = np[k - 1] * nu / T(k);
    }
    for (int d = 0; d <= order; ++d)
        for (int q = 0; q <= d; ++q) r.at(d - q, q) = mp[d - q] * np[q];
    return r;
}

// Holomorphic polynomial Σ c_k z^k re-expanded about z0: jet of f(z0 + w) in w.
template <class T>
Jet<T> jet_of_polynomial(const std::vector<T>& coeffs, const T& z0, int order) {
    Jet<T> r(order);
    const int deg = int(coeffs.size()) - 1;
    for (int m = 0; m <= std::min(order, deg); ++m) {
        // f^{(m)}(z0)/m! = Σ_k C(k,m) c_k z0^{k−m}
        T s = scalar_traits<T>::zero();
        for (int k = deg; k >= m; --k) {
            T binom = scalar_traits<T>::one();
            for (int t = 0; t < m; ++t) binom = binom * T(k - t) / T(t + 1);
            T zp = scalar_traits<T>::one();
            for (int t = 0; t < k - m; ++t) zp *= z0;
            s += binom * coeffs[k] * zp;
        }
        r.at(m, 0) = s;
    }
    return r;
}

template <class T>
struct JetVec7 {
    std::array<Jet<T>, 7> c;

    JetVec7() = default;
    explicit JetVec7(int order) { c.fill(Jet<T>(order)); }
    static JetVec7 constant(const Vec7<T>& v, int order) {
        JetVec7 r(order);
        for (int k = 0; k < 7; ++k) r.c[k] = Jet<T>::constant(v[k], order);
        return r;
    }

    int order() const {
        int n = c[0].order();
        for (auto& x : c) n = std::min(n, x.order());
        return n;
    }
    Jet<T>& operator[](int k) { return c[k]; }
    const Jet<T>& operator[](int k) const { return c[k]; }

    JetVec7& operator+=(const JetVec7& o) { for (int k = 0; k < 7; ++k) c[k] += o.c[k]; return *this; }
    JetVec7& operator-=(const JetVec7& o) { for (int k = 0; k < 7; ++k) c[k] -= o.c[k]; return *this; }
    friend JetVec7 operator+(JetVec7 a, const JetVec7& b) { return a += b; }
    friend JetVec7 operator-(JetVec7 a, const JetVec7& b) { return a -= b; }
    friend JetVec7 operator-(JetVec7 a) { for (auto& x : a.c) x = -x; return a; }
    friend JetVec7 operator*(const T& s, JetVec7 a) { for (auto& x : a.c) x = s * x; return a; }
    friend JetVec7 operator*(const Jet<T>& f, const JetVec7& a) {
        JetVec7 r;
        for (int k = 0; k < 7; ++k) r.c[k] = f * a.c[k];
        return r;
    }

    JetVec7 truncated(int m) const { JetVec7 r; for (int k = 0; k < 7; ++k) r.c[k] = c[k].truncated(m); return r; }
    Vec7<T> eval0() const { Vec7<T> v; for (int k = 0; k < 7; ++k) v[k] = c[k].eval0(); return v; }
    double max_abs() const { double m = 0; for (auto& x : c) m = std::max(m, x.max_abs()); return m; }
    bool is_zero(double tol = kDefaultTol) const {
        for (auto& x : c) if (!x.is_zero(tol)) return false;
        return true;
    }
    friend JetVec7 dz(const JetVec7& a) { JetVec7 r; for (int k = 0; k < 7; ++k) r.c[k] = dz(a.c[k]); return r; }
    friend JetVec7 dzbar(const JetVec7& a) { JetVec7 r; for (int k = 0; k < 7; ++k) r.c[k] = dzbar(a.c[k]); return r; }
    friend JetVec7 conj(const JetVec7& a) { JetVec7 r; for (int k = 0; k < 7; ++k) r.c[k] = conj(a.c[k]); return r; }
};

template <class T>
JetVec7<T> cross(const JetVec7<T>& u, const JetVec7<T>& v) {
    const auto& t = cross_table();
    JetVec7<T> r(std::min(u.order(), v.order()));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            int s = t.sgn[i][j];
            if (s == 0) continue;
            if (s > 0) r[t.idx[i][j]] += u[i] * v[j];
            else r[t.idx[i][j]] -= u[i] * v[j];
        }
    return r;
}

template <class T>
Jet<T> dot(const JetVec7<T>& u, const JetVec7<T>& v) {
    Jet<T> s(std::min(u.order(), v.order()));
    for (int k = 0; k < 7; ++k) s += u[k] * v[k];
    return s;
}

// (u, v̄) with v̄ the conjugate section.
template <class T>
Jet<T> herm(const JetVec7<T>& u, const JetVec7<T>& v) {
    return dot(u, conj(v));
}

template <class T>
class JetMatrix {
public:
    JetMatrix() = default;
    JetMatrix(int r, int c, int order) : r_(r), c_(c), a_(size_t(r) * c, Jet<T>(order)), order_hint_(order) {}

    static JetMatrix identity(int n, int order) {
        JetMatrix m(n, n, order);
        for (int i = 0; i < n; ++i) m(i, i) = Jet<T>::constant(scalar_traits<T>::one(), order);
        return m;
    }
    static JetMatrix constant(const Mat<T>& c, int order) {
        JetMatrix m(c.rows(), c.cols(), order);
        for (int i = 0; i < c.rows(); ++i)
            for (int j = 0; j < c.cols(); ++j) m(i, j) = Jet<T>::constant(c(i, j), order);
        return m;
    }
    static JetMatrix from_cols(const std::vector<JetVec7<T>>& cols, int order) {
        JetMatrix m(7, int(cols.size()), order);
        for (size_t j = 0; j < cols.size(); ++j)
            for (int i = 0; i < 7; ++i) m(i, int(j)) = cols[j][i].truncated(order);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    int order() const {
        if (a_.empty()) return order_hint_;
        int n = a_[0].order();
        for (auto& x : a_) n = std::min(n, x.order());
        return n;
    }
    Jet<T>& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
    const Jet<T>& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

    JetVec7<T> col(int j) const {
        JetVec7<T> v;
        for (int i = 0; i < 7; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<JetVec7<T>> columns() const {
        std::vector<JetVec7<T>> out;
        for (int j = 0; j < c_; ++j) out.push_back(col(j));
        return out;
    }
    JetMatrix cols_at(const std::vector<int>& idx) const {
        JetMatrix m(r_, int(idx.size()), order());
        for (int i = 0; i < r_; ++i)
            for (size_t k = 0; k < idx.size(); ++k) m(i, int(k)) = (*this)(i, idx[k]);
        return m;
    }
    JetMatrix hcat(const JetMatrix& o) const {
        int n = std::min(order(), o.order());
        JetMatrix m(r_, c_ + o.c_, n);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j).truncated(n);
            for (int j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j).truncated(n);
        }
        return m;
    }
    JetMatrix truncated(int n) const {
        JetMatrix m = *this;
        for (auto& x : m.a_) x = x.truncated(n);
        m.order_hint_ = n;
        return m;
    }

    Mat<T> eval0() const {
        Mat<T> m(r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j).eval0();
        return m;
    }
    JetMatrix adjoint() const {
        JetMatrix m(c_, r_, order());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = conj((*this)(i, j));
        return m;
    }
    JetMatrix transpose() const {
        JetMatrix m(c_, r_, order());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    JetMatrix conj_entries() const {
        JetMatrix m = *this;
        for (auto& x : m.a_) x = conj(x);
        return m;
    }
    friend JetMatrix dz(const JetMatrix& a) { return a.map([](const Jet<T>& x) { return dz(x); }, a.order() - 1); }
    friend JetMatrix dzbar(const JetMatrix& a) { return a.map([](const Jet<T>& x) { return dzbar(x); }, a.order() - 1); }

    friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("JetMatrix: shape mismatch in product");
        JetMatrix m(a.r_, b.c_, std::min(a.order(), b.order()));
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const Jet<T>& x = a(i, k);
                if (x.is_zero(0.0)) continue;
                for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
            }
        return m;
    }
    friend JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
        JetMatrix m(a.r_, a.c_, std::min(a.order(), b.order()));
        for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = a.a_[k] + b.a_[k];
        return m;
    }
    friend JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) {
        JetMatrix m(a.r_, a.c_, std::min(a.order(), b.order()));
        for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = a.a_[k] - b.a_[k];
        return m;
    }
    friend JetMatrix operator*(const T& s, JetMatrix a) {
        for (auto& x : a.a_) x = s * x;
        return a;
    }
    JetVec7<T> apply(const JetVec7<T>& v) const {
        JetVec7<T> r(std::min(order(), v.order()));
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    // Neumann series about the constant term.
    JetMatrix inverse(double tol = kDefaultTol) const {
        const int n = order();
        Mat<T> G0inv = g2t::inverse(eval0(), tol);
        JetMatrix E = *this - JetMatrix::constant(eval0(), n);
        JetMatrix K = JetMatrix::constant(G0inv, n);
        JetMatrix step = T(-1) * (K * E);
        JetMatrix term = K, sum = K;
        for (int k = 1; k <= n; ++k) {
            term = step * term;
            sum = sum + term;
        }
        return sum;
    }

    double max_abs() const { double m = 0; for (auto& x : a_) m = std::max(m, x.max_abs()); return m; }
    bool is_zero(double tol = kDefaultTol) const {
        for (auto& x : a_) if (!x.is_zero(tol)) return false;
        return true;
    }

private:
    template <class F>
    JetMatrix map(F f, int n) const {
        JetMatrix m(r_, c_, std::max(n, 0));
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = f(a_[k]);
        m.order_hint_ = n;
        return m;
    }
    int r_ = 0, c_ = 0;
    std::vector<Jet<T>> a_;
    int order_hint_ = 0;
};

// exp(zE) for nilpotent E, as a holomorphic jet matrix.
template <class T>
JetMatrix<T> jet_exp_nilpotent(const Mat<T>& E, int order) {
    const int n = E.rows();
    JetMatrix<T> r = JetMatrix<T>::identity(n, order);
    Mat<T> pw = Mat<T>::identity(n);
    T fact = scalar_traits<T>::one();
    for (int k = 1; k <= order; ++k) {
        pw = pw * E;
        fact = fact * scalar_traits<T>::from_int(k);
        if (pw.is_zero(0.0)) break;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j).at(k, 0) = pw(i, j) / fact;
    }
    return r;
}

template <class T>
Mat<T> exp_nilpotent(const Mat<T>& E) {
    const int n = E.rows();
    Mat<T> r = Mat<T>::identity(n), pw = Mat<T>::identity(n);
    T fact = scalar_traits<T>::one();
    for (int k = 1; k <= n; ++k) {
        pw = pw * E;
        fact = fact * scalar_traits<T>::from_int(k);
        r = r + (scalar_traits<T>::one() / fact) * pw;
    }
    return r;
}

}  // namespace g2t

#pragma once
#include "g2t/scalar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace g2t {

inline constexpr double kDefaultTol = 1e-9;

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int r, int c) : r_(r), c_(c), a_(size_t(r) * c, scalar_traits<T>::zero()) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

    std::vector<T> col(int j) const {
        std::vector<T> v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const std::vector<T>& v) {
        for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }
    Mat cols_at(const std::vector<int>& idx) const {
        Mat m(r_, int(idx.size()));
        for (int i = 0; i < r_; ++i)
            for (size_t k = 0; k < idx.size(); ++k) m(i, int(k)) = (*this)(i, idx[k]);
        return m;
    }
    static Mat from_cols(int rows, const std::vector<std::vector<T>>& cols) {
        Mat m(rows, int(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j) m.set_col(int(j), cols[j]);
        return m;
    }
    Mat hcat(const Mat& o) const {
        Mat m(r_, c_ + o.c_);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
            for (int j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j);
        }
        return m;
    }
    Mat vcat(const Mat& o) const {
        Mat m(r_ + o.r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
        for (int i = 0; i < o.r_; ++i)
            for (int j = 0; j < c_; ++j) m(r_ + i, j) = o(i, j);
        return m;
    }

    Mat adjoint() const {
        Mat m(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = sconj((*this)(i, j));
        return m;
    }
    Mat transpose() const {
        Mat m(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Mat conj() const {
        Mat m = *this;
        for (auto& x : m.a_) x = sconj(x);
        return m;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("Mat: shape mismatch in product");
        Mat m(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const T& x = a(i, k);
                if (scalar_traits<T>::is_zero(x, 0.0)) continue;
                for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
            }
        return m;
    }
    friend Mat operator+(Mat a, const Mat& b) {
        for (size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
        return a;
    }
    friend Mat operator-(Mat a, const Mat& b) {
        for (size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
        return a;
    }
    friend Mat operator*(const T& s, Mat a) {
        for (auto& x : a.a_) x *= s;
        return a;
    }
    std::vector<T> apply(const std::vector<T>& v) const {
        std::vector<T> out(r_, scalar_traits<T>::zero());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& x : a_) m = std::max(m, scalar_traits<T>::mag(x));
        return m;
    }
    bool is_zero(double tol) const {
        for (const auto& x : a_)
            if (!scalar_traits<T>::is_zero(x, tol)) return false;
        return true;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<T> a_;
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const Mat<cplx>& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Mat<cplx> from_eigen(const Eigen::MatrixXcd& e) {
    Mat<cplx> m(int(e.rows()), int(e.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<int> rref(Mat<T>& m) {
    std::vector<int> piv;
    int row = 0;
    for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
        int p = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!m(i, c).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        T inv = T(1) / m(row, c);
        for (int j = c; j < m.cols(); ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            T f = m(i, c);
            for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

inline double rank_threshold(double tol, double scale) { return tol * std::max(1.0, scale); }

}  // namespace detail

// Indices of a maximal independent set of columns. Exact: first independent
// columns in order. Float: column-pivoted QR order.
template <class T>
std::vector<int> pivot_columns(const Mat<T>& m, double tol = kDefaultTol) {
    if (m.cols() == 0 || m.rows() == 0) return {};
    if constexpr (is_exact_v<T>) {
        Mat<T> w = m;
        return detail::rref(w);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(detail::to_eigen(m));
        const auto& R = qr.matrixR();
        int n = int(std::min(R.rows(), R.cols()));
        double thr = detail::rank_threshold(tol, n ? std::abs(R(0, 0)) : 0.0);
        std::vector<int> idx;
        for (int k = 0; k < n; ++k) {
            if (std::abs(R(k, k)) <= thr) break;
            idx.push_back(int(qr.colsPermutation().indices()(k)));
        }
        return idx;
    }
}

template <class T>
int rank(const Mat<T>& m, double tol = kDefaultTol) {
    if (m.cols() == 0 || m.rows() == 0) return 0;
    if constexpr (is_exact_v<T>) {
        return int(pivot_columns(m, tol).size());
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(m));
        const auto& s = svd.singularValues();
        double thr = detail::rank_threshold(tol, s.size() ? s(0) : 0.0);
        int r = 0;
        for (int k = 0; k < s.size(); ++k)
            if (s(k) > thr) ++r;
        return r;
    }
}

// Columns form a basis of the kernel.
template <class T>
Mat<T> nullspace(const Mat<T>& m, double tol = kDefaultTol) {
    const int n = m.cols();
    if (m.rows() == 0) return Mat<T>::identity(n);
    if constexpr (is_exact_v<T>) {
        Mat<T> w = m;
        auto piv = detail::rref(w);
        std::vector<bool> is_piv(n, false);
        for (int p : piv) is_piv[p] = true;
        std::vector<std::vector<T>> basis;
        for (int f = 0; f < n; ++f) {
            if (is_piv[f]) continue;
            std::vector<T> v(n, T(0));
            v[f] = T(1);
            for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -w(int(r), f);
            basis.push_back(std::move(v));
        }
        return Mat<T>::from_cols(n, basis);
    } else {
        Eigen::MatrixXcd e = detail::to_eigen(m);
        if (e.rows() < e.cols()) {
            Eigen::MatrixXcd pad = Eigen::MatrixXcd::Zero(e.cols(), e.cols());
            pad.topRows(e.rows()) = e;
            e = pad;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        double thr = detail::rank_threshold(tol, s.size() ? s(0) : 0.0);
        int r = 0;
        for (int k = 0; k < s.size(); ++k)
            if (s(k) > thr) ++r;
        Eigen::MatrixXcd V = svd.matrixV().rightCols(n - r);
        return detail::from_eigen(V);
    }
}

template <class T>
Mat<T> inverse(const Mat<T>& m, double tol = kDefaultTol) {
    const int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    if constexpr (is_exact_v<T>) {
        Mat<T> w = m.hcat(Mat<T>::identity(n));
        auto piv = detail::rref(w);
        if (int(piv.size()) < n || piv[n - 1] != n - 1) throw SingularMatrix("inverse: singular matrix");
        Mat<T> out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) = w(i, n + j);
        return out;
    } else {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(detail::to_eigen(m));
        lu.setThreshold(tol);
        if (!lu.isInvertible()) throw SingularMatrix("inverse: singular matrix");
        return detail::from_eigen(lu.inverse());
    }
}

}  // namespace g2t

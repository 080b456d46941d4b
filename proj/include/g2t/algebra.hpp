#pragma once
#include "g2t/linalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace g2t {

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class T>
struct Vec7 {
    std::array<T, 7> c;

    Vec7() { c.fill(scalar_traits<T>::zero()); }
    explicit Vec7(const std::array<T, 7>& a) : c(a) {}
    static Vec7 basis(int k) { Vec7 v; v.c[k] = scalar_traits<T>::one(); return v; }
    static Vec7 from(const std::vector<T>& v) { Vec7 r; for (int k = 0; k < 7; ++k) r.c[k] = v[k]; return r; }
    std::vector<T> vec() const { return {c.begin(), c.end()}; }

    T& operator[](int k) { return c[k]; }
    const T& operator[](int k) const { return c[k]; }

    Vec7& operator+=(const Vec7& o) { for (int k = 0; k < 7; ++k) c[k] += o.c[k]; return *this; }
    Vec7& operator-=(const Vec7& o) { for (int k = 0; k < 7; ++k) c[k] -= o.c[k]; return *this; }
    friend Vec7 operator+(Vec7 a, const Vec7& b) { return a += b; }
    friend Vec7 operator-(Vec7 a, const Vec7& b) { return a -= b; }
    friend Vec7 operator-(Vec7 a) { for (auto& x : a.c) x = -x; return a; }
    friend Vec7 operator*(const T& s, Vec7 a) { for (auto& x : a.c) x *= s; return a; }

    Vec7 conj() const { Vec7 r; for (int k = 0; k < 7; ++k) r.c[k] = sconj(c[k]); return r; }
    double max_abs() const { double m = 0; for (auto& x : c) m = std::max(m, scalar_traits<T>::mag(x)); return m; }
    bool is_zero(double tol = kDefaultTol) const {
        for (auto& x : c) if (!scalar_traits<T>::is_zero(x, tol)) return false;
        return true;
    }
    friend bool operator==(const Vec7& a, const Vec7& b) { return a.c == b.c; }
};

template <class T, class U>
Vec7<T> convert_vec(const Vec7<U>& v) {
    Vec7<T> r;
    for (int k = 0; k < 7; ++k) {
        if constexpr (std::is_same_v<U, QI>) r[k] = scalar_traits<T>::from_qi(v[k]);
        else r[k] = T(v[k]);
    }
    return r;
}

template <class T>
Mat<T> convert_mat(const Mat<QI>& m) {
    Mat<T> r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = scalar_traits<T>::from_qi(m(i, j));
    return r;
}

// Oriented lines of the Fano plane (0-based): e_a e_b = e_c.
inline constexpr int kFanoLines[7][3] = {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 3, 6},
                                         {0, 6, 5}, {1, 4, 6}, {2, 5, 4}};

struct CrossTable {
    int idx[7][7];
    int sgn[7][7];
};

const CrossTable& cross_table();

template <class T>
Vec7<T> cross(const Vec7<T>& u, const Vec7<T>& v) {
    const auto& t = cross_table();
    Vec7<T> r;
    for (int i = 0; i < 7; ++i) {
        if (scalar_traits<T>::is_zero(u[i], 0.0)) continue;
        for (int j = 0; j < 7; ++j) {
            int s = t.sgn[i][j];
            if (s == 0) continue;
            if (s > 0) r[t.idx[i][j]] += u[i] * v[j];
            else r[t.idx[i][j]] -= u[i] * v[j];
        }
    }
    return r;
}

template <class T>
T dot(const Vec7<T>& u, const Vec7<T>& v) {
    T s = scalar_traits<T>::zero();
    for (int k = 0; k < 7; ++k) s += u[k] * v[k];
    return s;
}

// (u, v̄)
template <class T>
T herm(const Vec7<T>& u, const Vec7<T>& v) {
    T s = scalar_traits<T>::zero();
    for (int k = 0; k < 7; ++k) s += u[k] * sconj(v[k]);
    return s;
}

// Octonions as pairs of quaternions (a, b) = a + b e, quaternion order (1, i, j, k).
template <class T>
using Oct = std::array<T, 8>;

namespace detail {
template <class T>
std::array<T, 4> qmul(const std::array<T, 4>& p, const std::array<T, 4>& q) {
    return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}
template <class T>
std::array<T, 4> qbar(const std::array<T, 4>& p) {
    return {p[0], -p[1], -p[2], -p[3]};
}
}  // namespace detail

// (a,b)(c,d) = (ac - d̄b, da + b c̄)
template <class T>
Oct<T> oct_mul(const Oct<T>& x, const Oct<T>& y) {
    std::array<T, 4> a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
    std::array<T, 4> c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
    auto ac = detail::qmul(a, c), db = detail::qmul(detail::qbar(d), b);
    auto da = detail::qmul(d, a), bc = detail::qmul(b, detail::qbar(c));
    Oct<T> r;
    for (int k = 0; k < 4; ++k) {
        r[k] = ac[k] - db[k];
        r[4 + k] = da[k] + bc[k];
    }
    return r;
}

template <class T>
Oct<T> to_oct(const Vec7<T>& v) {
    return {scalar_traits<T>::zero(), v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

template <class T>
Vec7<T> im_part(const Oct<T>& o) {
    Vec7<T> v;
    for (int k = 0; k < 7; ++k) v[k] = o[k + 1];
    return v;
}

// [u,v,w] = (uv)w - u(vw); the real part vanishes for imaginary arguments.
template <class T>
Vec7<T> associator(const Vec7<T>& u, const Vec7<T>& v, const Vec7<T>& w) {
    auto U = to_oct(u), V = to_oct(v), W = to_oct(w);
    auto l = oct_mul(oct_mul(U, V), W);
    auto r = oct_mul(U, oct_mul(V, W));
    Vec7<T> out;
    for (int k = 0; k < 7; ++k) out[k] = l[k + 1] - r[k + 1];
    return out;
}

// Left multiplication matrix x ↦ b × x.
template <class T>
Mat<T> cross_matrix(const Vec7<T>& b) {
    Mat<T> m(7, 7);
    for (int j = 0; j < 7; ++j) {
        auto col = cross(b, Vec7<T>::basis(j));
        for (int i = 0; i < 7; ++i) m(i, j) = col[i];
    }
    return m;
}

template <class T>
class Subspace {
public:
    Subspace() = default;

    static Subspace span(const std::vector<Vec7<T>>& vs, double tol = kDefaultTol) {
        Subspace s;
        if (vs.empty()) return s;
        Mat<T> m = as_matrix(vs);
        auto piv = pivot_columns(m, tol);
        std::sort(piv.begin(), piv.end());
        for (int p : piv) s.basis_.push_back(vs[p]);
        return s;
    }
    static Subspace from_matrix(const Mat<T>& m, double tol = kDefaultTol) {
        std::vector<Vec7<T>> vs;
        for (int j = 0; j < m.cols(); ++j) vs.push_back(Vec7<T>::from(m.col(j)));
        return span(vs, tol);
    }
    static Subspace whole() {
        std::vector<Vec7<T>> vs;
        for (int k = 0; k < 7; ++k) vs.push_back(Vec7<T>::basis(k));
        return span(vs);
    }

    int rank() const { return int(basis_.size()); }
    const std::vector<Vec7<T>>& basis() const { return basis_; }
    const Vec7<T>& operator[](int k) const { return basis_[k]; }
    Mat<T> matrix() const { return as_matrix(basis_); }

    Mat<T> projector(double tol = kDefaultTol) const {
        if (basis_.empty()) return Mat<T>(7, 7);
        Mat<T> S = matrix();
        Mat<T> G = S.adjoint() * S;
        return S * inverse(G, tol) * S.adjoint();
    }
    Vec7<T> project(const Vec7<T>& v, double tol = kDefaultTol) const {
        return Vec7<T>::from(projector(tol).apply(v.vec()));
    }

    bool contains(const Vec7<T>& v, double tol = kDefaultTol) const {
        if (basis_.empty()) return v.is_zero(tol);
        Vec7<T> r = v - project(v, tol);
        return r.is_zero(tol * std::max(1.0, v.max_abs()));
    }
    bool contains(const Subspace& o, double tol = kDefaultTol) const {
        for (auto& v : o.basis_)
            if (!contains(v, tol)) return false;
        return true;
    }
    friend bool same(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
        return a.rank() == b.rank() && a.contains(b, tol);
    }

    Subspace conj() const {
        Subspace s;
        for (auto& v : basis_) s.basis_.push_back(v.conj());
        return s;
    }
    // Hermitian orthogonal complement.
    Subspace perp(double tol = kDefaultTol) const {
        if (basis_.empty()) return whole();
        return from_matrix(nullspace(matrix().adjoint(), tol), tol);
    }
    friend Subspace operator+(const Subspace& a, const Subspace& b) {
        auto vs = a.basis_;
        vs.insert(vs.end(), b.basis_.begin(), b.basis_.end());
        return span(vs);
    }
    friend Subspace intersect(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
        if (a.rank() == 0 || b.rank() == 0) return Subspace();
        Mat<T> m = a.matrix().hcat(T(-1) * b.matrix());
        Mat<T> n = nullspace(m, tol);
        std::vector<Vec7<T>> vs;
        Mat<T> A = a.matrix();
        for (int j = 0; j < n.cols(); ++j) {
            std::vector<T> x(a.rank());
            for (int k = 0; k < a.rank(); ++k) x[k] = n(k, j);
            vs.push_back(Vec7<T>::from(A.apply(x)));
        }
        return span(vs, tol);
    }
    // a ⊖ b: complement of b inside a.
    friend Subspace ominus(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
        return intersect(a, b.perp(tol), tol);
    }

    bool is_real(double tol = kDefaultTol) const { return contains(conj(), tol); }
    bool is_isotropic(double tol = kDefaultTol) const {
        for (auto& u : basis_)
            for (auto& v : basis_)
                if (!scalar_traits<T>::is_zero(dot(u, v), tol * std::max(1.0, u.max_abs() * v.max_abs())))
                    return false;
        return true;
    }

private:
    static Mat<T> as_matrix(const std::vector<Vec7<T>>& vs) {
        Mat<T> m(7, int(vs.size()));
        for (size_t j = 0; j < vs.size(); ++j)
            for (int i = 0; i < 7; ++i) m(i, int(j)) = vs[j][i];
        return m;
    }
    std::vector<Vec7<T>> basis_;
};

template <class T>
bool is_associative(const Subspace<T>& xi, double tol = kDefaultTol) {
    if (xi.rank() != 3) throw PreconditionError("is_associative: rank must be 3");
    if (!xi.is_real(tol)) throw PreconditionError("is_associative: subspace is not real");
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (!xi.contains(cross(xi[a], xi[b]), tol)) return false;
    return true;
}

template <class T>
bool is_complex_coassociative(const Subspace<T>& W, double tol = kDefaultTol) {
    if (W.rank() != 2) throw PreconditionError("is_complex_coassociative: rank must be 2");
    return cross(W[0], W[1]).is_zero(tol * std::max(1.0, W[0].max_abs() * W[1].max_abs()));
}

template <class T>
Subspace<T> annihilator(const Subspace<T>& beta, double tol = kDefaultTol) {
    if (beta.rank() == 0) return Subspace<T>::whole();
    Mat<T> stack(0, 7);
    for (auto& b : beta.basis()) stack = stack.vcat(cross_matrix(b));
    return Subspace<T>::from_matrix(nullspace(stack, tol), tol);
}

enum class Sign { Plus, Minus };

template <class T>
Subspace<T> extend_isotropic_line(const Subspace<T>& beta, const Subspace<T>& xi, Sign sign,
                                  double tol = kDefaultTol) {
    if (!is_associative(xi, tol)) throw PreconditionError("extend_isotropic_line: ξ is not associative");
    if (beta.rank() != 1 || !beta.is_isotropic(tol))
        throw PreconditionError("extend_isotropic_line: β must be an isotropic line");
    Subspace<T> xperp = xi.perp(tol);
    if (!xperp.contains(beta, tol)) throw PreconditionError("extend_isotropic_line: β not in ξ⊥");
    if (sign == Sign::Plus) return intersect(annihilator(beta, tol), xperp, tol);
    Subspace<T> bb = beta.conj();
    return beta + intersect(intersect(bb.perp(tol), annihilator(bb, tol), tol), xperp, tol);
}

// Weights are integer coordinates (a, b) of a α₁ + b α₂.
struct Weight {
    int a = 0, b = 0;
    friend bool operator==(const Weight& x, const Weight& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator<(const Weight& x, const Weight& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; }
    friend Weight operator+(const Weight& x, const Weight& y) { return {x.a + y.a, x.b + y.b}; }
    friend Weight operator-(const Weight& x) { return {-x.a, -x.b}; }
};

inline const std::array<Weight, 7>& short_weights() {
    static const std::array<Weight, 7> w{Weight{-2, -1}, Weight{-1, -1}, Weight{-1, 0}, Weight{0, 0},
                                         Weight{1, 0},   Weight{1, 1},   Weight{2, 1}};
    return w;
}
bool is_weight(const Weight& w);
const std::array<Weight, 12>& roots();
std::string weight_label(const Weight& w);

// Real basis of the derivation algebra of (R^7, ×), dimension 14.
const std::vector<Mat<QI>>& g2_basis();

// Exact weight vectors: ℓ_{±α₁}, ℓ_{±(α₁+α₂)}, ℓ_{∓(2α₁+α₂)} have squared norm 2, ℓ₀ = e₁.
const std::map<Weight, Vec7<QI>>& exact_weight_vectors();

// Complex derivation E with E ℓ_λ ⊆ ℓ_{λ+α}.
const Mat<QI>& root_vector(const Weight& alpha);

template <class T>
struct WeightBasis {
    std::map<Weight, Vec7<T>> vectors;
    const Vec7<T>& operator[](const Weight& w) const { return vectors.at(w); }
    Subspace<T> line(const Weight& w) const { return Subspace<T>::span({vectors.at(w)}); }
    Subspace<T> lines(std::initializer_list<Weight> ws) const {
        std::vector<Vec7<T>> vs;
        for (auto& w : ws) vs.push_back(vectors.at(w));
        return Subspace<T>::span(vs);
    }
};

// Float basis is unit normalized; exact basis keeps squared norm 2 off ℓ₀.
template <class T>
WeightBasis<T> build_weight_basis() {
    WeightBasis<T> wb;
    for (auto& [w, v] : exact_weight_vectors()) {
        Vec7<T> x = convert_vec<T>(v);
        if constexpr (!is_exact_v<T>) {
            if (!(w == Weight{0, 0})) x = T(1.0 / std::sqrt(2.0)) * x;
        }
        wb.vectors[w] = x;
    }
    return wb;
}

// Legs ψ_{-s..s} of the standard G₂-flag, as subspaces in the weight basis.
template <class T>
std::vector<Subspace<T>> standard_flag_legs(int s) {
    auto wb = build_weight_basis<T>();
    using W = Weight;
    auto real_mid = wb.lines({W{-1, 0}, W{0, 0}, W{1, 0}});
    switch (s) {
        case 1:
            return {wb.lines({W{-2, -1}, W{-1, -1}}), real_mid, wb.lines({W{1, 1}, W{2, 1}})};
        case 2:
            return {wb.line(W{-1, 0}), wb.lines({W{1, 1}, W{-2, -1}}), wb.line(W{0, 0}),
                    wb.lines({W{-1, -1}, W{2, 1}}), wb.line(W{1, 0})};
        case 3:
            return {wb.line(W{-2, -1}), wb.line(W{-1, 0}), wb.line(W{-1, -1}), wb.line(W{0, 0}),
                    wb.line(W{1, 1}),   wb.line(W{1, 0}),  wb.line(W{2, 1})};
        default:
            throw PreconditionError("standard_flag: s must be 1, 2 or 3");
    }
}

}  // namespace g2t

#pragma once
#include "g2t/s6maps.hpp"

#include <map>
#include <numbers>

namespace g2t {

struct ContainmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Σ_k λ^k v_k with jet coefficients.
template <class T>
struct LoopVec {
    std::map<int, JetVec7<T>> c;

    static LoopVec mono(int k, const JetVec7<T>& v) {
        LoopVec r;
        r.c[k] = v;
        return r;
    }
    int order() const {
        int n = 1 << 20;
        for (auto& [k, v] : c) n = std::min(n, v.order());
        return c.empty() ? 0 : n;
    }
    double max_abs() const {
        double m = 0;
        for (auto& [k, v] : c) m = std::max(m, v.max_abs());
        return m;
    }
    JetVec7<T> coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? JetVec7<T>(order()) : it->second;
    }
    LoopVec shifted(int k) const {
        LoopVec r;
        for (auto& [j, v] : c) r.c[j + k] = v;
        return r;
    }
    // Drops degrees above k.
    LoopVec cut_above(int k) const {
        LoopVec r;
        for (auto& [j, v] : c)
            if (j <= k) r.c[j] = v;
        return r;
    }
    LoopVec truncated(int n) const {
        LoopVec r;
        for (auto& [k, v] : c) r.c[k] = v.truncated(n);
        return r;
    }
    // Lowest degree with a non-negligible coefficient.
    std::optional<int> low(double tol) const {
        double sc = max_abs();
        for (auto& [k, v] : c)
            if (!negligible(v, tol, sc)) return k;
        return std::nullopt;
    }
    std::optional<int> high(double tol) const {
        double sc = max_abs();
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            if (!negligible(it->second, tol, sc)) return it->first;
        return std::nullopt;
    }

    friend LoopVec operator+(LoopVec a, const LoopVec& b) {
        int n = std::min(a.c.empty() ? b.order() : a.order(), b.c.empty() ? a.order() : b.order());
        for (auto& [k, v] : b.c) {
            auto it = a.c.find(k);
            if (it == a.c.end()) a.c[k] = v.truncated(n);
            else it->second = it->second.truncated(n) + v.truncated(n);
        }
        for (auto& [k, v] : a.c) v = v.truncated(std::min(n, v.order()));
        return a;
    }
    friend LoopVec operator-(const LoopVec& a, const LoopVec& b) { return a + Jet<T>::constant(T(-1), b.order()) * b; }
    friend LoopVec operator*(const Jet<T>& f, LoopVec a) {
        for (auto& [k, v] : a.c) v = f * v;
        return a;
    }
};

template <class T>
LoopVec<T> cross(const LoopVec<T>& u, const LoopVec<T>& v) {
    LoopVec<T> r;
    for (auto& [i, a] : u.c)
        for (auto& [j, b] : v.c) {
            auto it = r.c.find(i + j);
            if (it == r.c.end()) r.c[i + j] = cross(a, b);
            else it->second = it->second + cross(a, b);
        }
    return r;
}

template <class T>
std::map<int, Jet<T>> dot(const LoopVec<T>& u, const LoopVec<T>& v) {
    std::map<int, Jet<T>> r;
    for (auto& [i, a] : u.c)
        for (auto& [j, b] : v.c) {
            auto it = r.find(i + j);
            if (it == r.end()) r[i + j] = dot(a, b);
            else it->second = it->second + dot(a, b);
        }
    return r;
}

// Σ_k λ^k T_k with 7×7 jet-matrix coefficients.
template <class T>
struct MatrixLoop {
    std::map<int, JetMatrix<T>> c;

    static MatrixLoop identity(int order) { return monomial(0, JetMatrix<T>::identity(7, order)); }
    static MatrixLoop monomial(int k, const JetMatrix<T>& m) {
        MatrixLoop r;
        r.c[k] = m;
        return r;
    }

    int order() const {
        int n = 1 << 20;
        for (auto& [k, m] : c) n = std::min(n, m.order());
        return c.empty() ? 0 : n;
    }
    int dmin() const { return c.empty() ? 0 : c.begin()->first; }
    int dmax() const { return c.empty() ? 0 : c.rbegin()->first; }
    JetMatrix<T> coeff(int k) const {
        auto it = c.find(k);
        return it == c.end() ? JetMatrix<T>(7, 7, order()) : it->second;
    }

    // Drops coefficients that vanish to tolerance.
    MatrixLoop pruned(double tol = kDefaultTol) const {
        MatrixLoop r;
        double sc = 0;
        for (auto& [k, m] : c) sc = std::max(sc, m.max_abs());
        for (auto& [k, m] : c)
            if (!negligible(m, tol, sc)) r.c[k] = m;
        return r;
    }
    MatrixLoop truncated(int n) const {
        MatrixLoop r;
        for (auto& [k, m] : c) r.c[k] = m.truncated(n);
        return r;
    }
    // Φ* on the circle, which is Φ⁻¹ for unitary loops.
    MatrixLoop adjoint() const {
        MatrixLoop r;
        for (auto& [k, m] : c) r.c[-k] = m.adjoint();
        return r;
    }
    MatrixLoop conj_entries() const {
        MatrixLoop r;
        for (auto& [k, m] : c) r.c[-k] = m.conj_entries();
        return r;
    }
    JetMatrix<T> at_one() const {
        JetMatrix<T> s(7, 7, order());
        for (auto& [k, m] : c) s = s + m;
        return s;
    }
    JetMatrix<T> at_minus_one() const {
        JetMatrix<T> s(7, 7, order());
        for (auto& [k, m] : c) s = (k % 2 == 0) ? s + m : s - m;
        return s;
    }
    Mat<cplx> eval(cplx lambda) const {
        Mat<cplx> out(7, 7);
        for (auto& [k, m] : c) {
            cplx w = std::pow(lambda, k);
            auto m0 = m.eval0();
            for (int i = 0; i < 7; ++i)
                for (int j = 0; j < 7; ++j) out(i, j) += w * scalar_traits<T>::to_cplx(m0(i, j));
        }
        return out;
    }

    friend MatrixLoop operator*(const MatrixLoop& a, const MatrixLoop& b) {
        MatrixLoop r;
        for (auto& [i, x] : a.c)
            for (auto& [j, y] : b.c) {
                auto it = r.c.find(i + j);
                if (it == r.c.end()) r.c[i + j] = x * y;
                else it->second = it->second + x * y;
            }
        return r;
    }
    friend MatrixLoop operator+(const MatrixLoop& a, const MatrixLoop& b) {
        MatrixLoop r = a;
        for (auto& [k, m] : b.c) {
            auto it = r.c.find(k);
            if (it == r.c.end()) r.c[k] = m;
            else it->second = it->second + m;
        }
        return r;
    }
    friend MatrixLoop dz(const MatrixLoop& a) {
        MatrixLoop r;
        for (auto& [k, m] : a.c) r.c[k] = dz(m);
        return r;
    }
    friend MatrixLoop dzbar(const MatrixLoop& a) {
        MatrixLoop r;
        for (auto& [k, m] : a.c) r.c[k] = dzbar(m);
        return r;
    }

    LoopVec<T> apply(const LoopVec<T>& v) const {
        LoopVec<T> r;
        for (auto& [i, m] : c)
            for (auto& [j, x] : v.c) {
                auto y = m.apply(x);
                auto it = r.c.find(i + j);
                if (it == r.c.end()) r.c[i + j] = y;
                else it->second = it->second + y;
            }
        return r;
    }
};

template <class T>
bool negligible(const MatrixLoop<T>& m, double tol, double scale = 1.0) {
    for (auto& [k, x] : m.c)
        if (!negligible(x, tol, scale)) return false;
    return true;
}

// Φ*Φ = I as a Laurent identity of jets.
template <class T>
bool is_unitary(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    auto P = phi.adjoint() * phi;
    P.c[0] = P.coeff(0) - JetMatrix<T>::identity(7, P.order());
    return negligible(P, tol);
}

// Φ(λ)*Φ(λ) = I at the base point for λ^points = 1.
template <class T>
bool is_unitary_on_circle(const MatrixLoop<T>& phi, int points = 16, double tol = 1e-9) {
    for (int p = 0; p < points; ++p) {
        cplx lam = std::polar(1.0, 2 * std::numbers::pi * p / points);
        Mat<cplx> U = phi.eval(lam);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                cplx s = 0;
                for (int k = 0; k < 7; ++k) s += std::conj(U(k, i)) * U(k, j);
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol) return false;
            }
    }
    return true;
}

template <class T>
bool is_based(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    return negligible(phi.at_one() - JetMatrix<T>::identity(7, phi.order()), tol);
}

// Real on the circle: conj(T_k) = T_{−k}, so Φ takes values in SO(7) there.
template <class T>
bool is_real_loop(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    for (int k = std::min(phi.dmin(), -phi.dmax()); k <= std::max(phi.dmax(), -phi.dmin()); ++k)
        if (!negligible(phi.coeff(k).conj_entries() - phi.coeff(-k), tol)) return false;
    return true;
}

// Φ⁻¹∂Φ = (1 − λ⁻¹)A and Φ⁻¹∂̄Φ = (1 − λ)B.
template <class T>
bool is_extended_solution(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    if (!is_unitary(phi, tol)) return false;
    auto inv = phi.adjoint();
    auto M = (inv * dz(phi)).pruned(tol), N = (inv * dzbar(phi)).pruned(tol);
    for (auto& [k, m] : M.c)
        if (k != 0 && k != -1) return false;
    for (auto& [k, m] : N.c)
        if (k != 0 && k != 1) return false;
    return negligible(M.coeff(0) + M.coeff(-1), tol) && negligible(N.coeff(0) + N.coeff(1), tol);
}

// Φ = Σ λ^k π_k with mutually orthogonal projections.
template <class T>
bool is_s1_invariant(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    for (auto& [i, a] : phi.c)
        for (auto& [j, b] : phi.c)
            if (i != j && !negligible(a.adjoint() * b, tol)) return false;
    return is_unitary(phi, tol);
}

// λ⁻¹π_α + π_{(α⊕ᾱ)⊥} + λπ_ᾱ for isotropic α.
template <class T>
MatrixLoop<T> uniton_factor(const JetSubbundle<T>& alpha) {
    const int n = alpha.order();
    if (alpha.rank() == 0) return MatrixLoop<T>::identity(n);
    if (!alpha.is_isotropic()) throw PreconditionError("uniton_factor: α and ᾱ are not orthogonal");
    JetMatrix<T> P = alpha.projector(), Pb = P.conj_entries();
    MatrixLoop<T> r;
    r.c[-1] = P;
    r.c[0] = JetMatrix<T>::identity(7, n) - P - Pb;
    r.c[1] = Pb;
    return r;
}

// π_α + λπ_α⊥
template <class T>
MatrixLoop<T> plain_uniton_factor(const JetSubbundle<T>& alpha) {
    MatrixLoop<T> r;
    r.c[0] = alpha.projector();
    r.c[1] = alpha.perp_projector();
    return r.pruned(0.0);
}

// Φ = Σ λ^i π_{ψ_i}
template <class T>
MatrixLoop<T> s1_invariant_loop(const Flag<T>& f) {
    MatrixLoop<T> r;
    int n = f.order();
    for (int i = f.lo; i <= f.hi(); ++i)
        if (f.leg(i).rank() > 0) r.c[i] = f.leg(i).truncated(n).projector();
    return r;
}

namespace detail {

// Float only: right-multiplies by R⁻¹ from a QR of the base-point value, so the Gram jet is close to I.
template <class T>
JetMatrix<T> base_orthonormal(const JetMatrix<T>& B) {
    if constexpr (is_exact_v<T>) {
        return B;
    } else {
        if (B.cols() == 0) return B;
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(to_eigen(B.eval0()));
        Eigen::MatrixXcd R = qr.matrixQR().topRows(B.cols()).template triangularView<Eigen::Upper>();
        return B * JetMatrix<T>::constant(from_eigen(R.inverse()), B.order());
    }
}

template <class T>
JetMatrix<T> leads(const std::vector<LoopVec<T>>& g, const std::vector<int>& d, int n) {
    std::vector<JetVec7<T>> cols;
    for (size_t j = 0; j < g.size(); ++j) cols.push_back(g[j].coeff(d[j]).truncated(n));
    return JetMatrix<T>::from_cols(cols, n);
}

// Left inverse of L, of full column rank at the base point: x = L c solved as c = M x.
template <class T>
struct SpanSolver {
    JetMatrix<T> L, M;
    double tol = kDefaultTol;

    SpanSolver() = default;
    SpanSolver(const JetMatrix<T>& l, double t) : L(l), tol(t) {
        if (L.cols() == 0) return;
        if constexpr (is_exact_v<T>) {
            M = (L.adjoint() * L).inverse(tol * tol) * L.adjoint();
        } else {
            // least squares through the better conditioned frame Q = L R⁻¹
            JetMatrix<T> Q = base_orthonormal(L);
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(to_eigen(L.eval0()));
            Eigen::MatrixXcd R = qr.matrixQR().topRows(L.cols()).template triangularView<Eigen::Upper>();
            M = JetMatrix<T>::constant(from_eigen(R.inverse()), L.order()) * (Q.adjoint() * Q).inverse(tol) * Q.adjoint();
        }
    }

    std::optional<std::vector<Jet<T>>> solve(const JetVec7<T>& x) const {
        if (L.cols() == 0) {
            if (negligible(x, tol)) return std::vector<Jet<T>>{};
            return std::nullopt;
        }
        const int n = std::min(L.order(), x.order());
        JetMatrix<T> Lt = L.truncated(n), X = JetMatrix<T>::from_cols({x}, n);
        JetMatrix<T> C = M.truncated(n) * X;
        double sc = std::max({1.0, x.max_abs(), Lt.max_abs() * C.max_abs()});
        if (!negligible(X - Lt * C, tol, sc)) return std::nullopt;
        std::vector<Jet<T>> out;
        for (int j = 0; j < C.rows(); ++j) out.push_back(C(j, 0));
        return out;
    }
};

template <class T>
std::optional<std::vector<Jet<T>>> solve_in_span(const JetMatrix<T>& L, const JetVec7<T>& x, double tol) {
    const int n = std::min(L.order(), x.order());
    return SpanSolver<T>(L.truncated(n), tol).solve(x.truncated(n));
}

}  // namespace detail

// W = ΦH₊ by a λ-echelon basis of W/λW: leading coefficients independent at the base point.
template <class T>
struct GrassModel {
    std::vector<LoopVec<T>> gens;
    std::vector<int> degrees;
    std::optional<MatrixLoop<T>> phi;
    double tol = kDefaultTol;

    int dmin() const { return *std::min_element(degrees.begin(), degrees.end()); }
    int dmax() const { return *std::max_element(degrees.begin(), degrees.end()); }
    // least s with λ^s H₊ ⊆ W ⊆ λ^{−s} H₊
    int s() const { return std::max(-dmin(), dmax()); }
    int order() const {
        int n = 1 << 20;
        for (auto& g : gens) n = std::min(n, g.order());
        return n;
    }
    JetMatrix<T> lead_matrix(int upto) const {
        std::vector<LoopVec<T>> g;
        std::vector<int> d;
        for (size_t j = 0; j < gens.size(); ++j)
            if (degrees[j] <= upto) {
                g.push_back(gens[j]);
                d.push_back(degrees[j]);
            }
        return detail::leads(g, d, order());
    }

    bool contains(LoopVec<T> x) const {
        const int n = std::min(order(), x.order());
        x = x.truncated(n).cut_above(dmax());
        for (;;) {
            auto lo = x.low(tol);
            if (!lo || *lo >= dmax()) return true;
            int d = *lo;
            if (d < dmin()) return false;
            std::vector<size_t> idx;
            for (size_t j = 0; j < gens.size(); ++j)
                if (degrees[j] <= d) idx.push_back(j);
            auto key = std::make_pair(d, n);
            auto it = solvers_.find(key);
            if (it == solvers_.end()) {
                std::vector<LoopVec<T>> g;
                std::vector<int> dd;
                for (auto j : idx) {
                    g.push_back(gens[j]);
                    dd.push_back(degrees[j]);
                }
                it = solvers_.emplace(key, detail::SpanSolver<T>(detail::leads(g, dd, n), tol)).first;
            }
            auto c = it->second.solve(x.coeff(d));
            if (!c) return false;
            for (size_t k = 0; k < idx.size(); ++k) x = x - (*c)[k] * gens[idx[k]].truncated(n).shifted(d - degrees[idx[k]]);
            x.c.erase(d);
            x = x.cut_above(dmax());
        }
    }

private:
    // lead solvers by (degree, jet order); gens and degrees must not change after the first query
    mutable std::map<std::pair<int, int>, detail::SpanSolver<T>> solvers_;
};

// Reduces module generators of W to a λ-echelon basis of W/λW; W must contain λ^cap H₊.
template <class T>
GrassModel<T> echelon_model(std::vector<LoopVec<T>> gens, int cap, double tol = kDefaultTol) {
    int n = 1 << 20;
    for (auto& g : gens) n = std::min(n, g.order());
    std::multimap<int, LoopVec<T>> pending;
    // λ^{cap+1} H₊ ⊆ λW, so tails above cap do not change classes in W/λW
    for (auto& g : gens) {
        auto lo = g.cut_above(cap).low(tol);
        if (lo) pending.emplace(*lo, g.cut_above(cap).truncated(n));
    }
    GrassModel<T> W;
    W.tol = tol;
    auto lead0_norm = [](const JetVec7<T>& v) {
        double m = 0;
        for (int i = 0; i < 7; ++i) m = std::max(m, scalar_traits<T>::mag(v[i].eval0()));
        return m;
    };
    while (!pending.empty()) {
        int d = pending.begin()->first;
        std::vector<LoopVec<T>> group;
        for (auto it = pending.lower_bound(d); it != pending.upper_bound(d); ++it) group.push_back(it->second);
        pending.erase(d);
        if (d > cap) continue;
        while (!group.empty()) {
            JetMatrix<T> L = detail::leads(W.gens, W.degrees, n);
            // accept the largest lead that is new at the base point
            int best = -1;
            double bn = 0;
            for (size_t k = 0; k < group.size(); ++k) {
                JetVec7<T> x = group[k].coeff(d);
                Mat<T> L0 = L.hcat(JetMatrix<T>::from_cols({x}, n)).eval0();
                if constexpr (!is_exact_v<T>)
                    for (int j = 0; j < L0.cols(); ++j) {
                        double m = 0;
                        for (int i = 0; i < 7; ++i) m = std::max(m, std::abs(L0(i, j)));
                        if (m > 0)
                            for (int i = 0; i < 7; ++i) L0(i, j) /= m;
                    }
                if (g2t::rank(L0, tol) > int(W.gens.size()) && lead0_norm(x) > bn) {
                    best = int(k);
                    bn = lead0_norm(x);
                }
            }
            if (best >= 0) {
                W.gens.push_back(group[size_t(best)]);
                W.degrees.push_back(d);
                group.erase(group.begin() + best);
                continue;
            }
            bool progress = false;
            for (size_t k = 0; k < group.size();) {
                auto c = detail::solve_in_span(L, group[k].coeff(d), tol);
                if (!c) {
                    ++k;
                    continue;
                }
                LoopVec<T> g = group[k];
                for (size_t j = 0; j < W.gens.size(); ++j) g = g - (*c)[j] * W.gens[j].shifted(d - W.degrees[j]);
                g.c.erase(d);
                g = g.cut_above(cap);
                if constexpr (!is_exact_v<T>)
                    if (g.max_abs() > 0) g = Jet<T>::constant(T(1.0 / g.max_abs()), n) * g;
                if (auto lo = g.low(tol)) pending.emplace(*lo, g);
                group.erase(group.begin() + long(k));
                progress = true;
            }
            if (!progress) throw RankDrop("echelon_model: degenerate basis at the base point");
        }
    }
    if (W.gens.size() != 7 || W.dmax() > cap) throw ContainmentError("echelon_model: W does not contain λ^cap H₊");
    return W;
}

template <class T>
GrassModel<T> grassmannian_model(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    auto p = phi.pruned(tol);
    std::vector<LoopVec<T>> gens;
    const int n = p.order();
    for (int j = 0; j < 7; ++j) {
        LoopVec<T> v;
        for (auto& [k, m] : p.c) v.c[k] = m.col(j).truncated(n);
        gens.push_back(v);
    }
    auto W = echelon_model(gens, p.dmax(), tol);
    W.phi = p;
    return W;
}

// The based loop with ΦH₊ = W, from a basis of W ⊖ λW.
template <class T>
MatrixLoop<T> loop_from_model(const GrassModel<T>& W) {
    const int a = W.dmin(), b = W.dmax(), D = b - a + 1, n = W.order();
    auto stack = [&](const LoopVec<T>& v) {
        JetMatrix<T> col(7 * D, 1, n);
        for (auto& [k, x] : v.c)
            if (k >= a && k <= b)
                for (int i = 0; i < 7; ++i) col(7 * (k - a) + i, 0) = x[i].truncated(n);
        return col;
    };
    std::vector<JetMatrix<T>> lam;
    for (size_t j = 0; j < W.gens.size(); ++j)
        for (int m = 1; W.degrees[j] + m <= b; ++m) lam.push_back(stack(W.gens[j].shifted(m)));
    JetMatrix<T> B(7 * D, int(lam.size()), n);
    for (size_t j = 0; j < lam.size(); ++j)
        for (int i = 0; i < 7 * D; ++i) B(i, int(j)) = lam[j](i, 0);
    B = detail::base_orthonormal(B);
    JetMatrix<T> Bt = B.adjoint();
    JetMatrix<T> Ginv = lam.empty() ? JetMatrix<T>(0, 0, n) : (Bt * B).inverse(W.tol * W.tol);
    MatrixLoop<T> raw;
    for (int k = a; k <= b; ++k) raw.c[k] = JetMatrix<T>(7, 7, n);
    for (size_t j = 0; j < W.gens.size(); ++j) {
        JetMatrix<T> u = stack(W.gens[j]);
        JetMatrix<T> q = lam.empty() ? u : u - B * (Ginv * (Bt * u));
        for (int k = a; k <= b; ++k)
            for (int i = 0; i < 7; ++i) raw.c[k](i, int(j)) = q(7 * (k - a) + i, 0);
    }
    JetMatrix<T> norm = raw.at_one().inverse(W.tol);
    return (raw * MatrixLoop<T>::monomial(0, norm)).pruned(W.tol);
}

// G₂ condition (i): W̄⊥ = λW, i.e. u·v ∈ H₊ for u, v ∈ W and index zero.
template <class T>
bool check_real_form(const GrassModel<T>& W) {
    int sum = 0;
    for (int d : W.degrees) sum += d;
    if (sum != 0) return false;
    for (size_t i = 0; i < W.gens.size(); ++i)
        for (size_t j = i; j < W.gens.size(); ++j) {
            double sc = W.gens[i].max_abs() * W.gens[j].max_abs();
            for (auto& [k, x] : dot(W.gens[i], W.gens[j]))
                if (k < 0 && !negligible(x, W.tol, sc)) return false;
        }
    return true;
}

// G₂ condition (ii): W × W ⊆ W.
template <class T>
bool check_vector_closure(const GrassModel<T>& W) {
    for (size_t i = 0; i < W.gens.size(); ++i)
        for (size_t j = i + 1; j < W.gens.size(); ++j)
            if (!W.contains(cross(W.gens[i], W.gens[j]))) return false;
    return true;
}

// ψ_i = Φ⁻¹(A_i), A_i the legs of the filtration of W/λW by W ∩ λ^i H₊.
template <class T>
Flag<T> canonical_lift(const GrassModel<T>& W) {
    if (!W.phi) throw PreconditionError("canonical_lift: model carries no loop");
    const int s = W.s(), n = std::min(W.order(), W.phi->order());
    MatrixLoop<T> inv = W.phi->adjoint().truncated(n);
    std::vector<JetVec7<T>> p;
    for (auto& g : W.gens) p.push_back(inv.apply(g.truncated(n)).coeff(0));
    std::vector<JetSubbundle<T>> chain;
    for (int i = s; i >= -s; --i) {
        std::vector<JetVec7<T>> sec;
        for (size_t j = 0; j < p.size(); ++j)
            if (W.degrees[j] >= i) sec.push_back(p[j]);
        chain.push_back(sec.empty() ? JetSubbundle<T>::zero(n) : JetSubbundle<T>::from_sections(sec, n, W.tol));
    }
    Flag<T> f;
    f.lo = -s;
    for (int i = -s; i <= s; ++i) {
        auto& Fi = chain[size_t(s - i)];
        f.legs.push_back(i == s ? Fi : ominus(Fi, chain[size_t(s - i - 1)]));
    }
    return f;
}

template <class T>
JetSubbundle<T> harmonic_map_of(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    return twistor_project(canonical_lift(grassmannian_model(phi, tol)));
}

struct UnitonNumber {
    int value = 0;
    bool exact = false;
};

// λ-degree span of Φ; exact when the image of the leading term is full (type one).
template <class T>
UnitonNumber uniton_number(const MatrixLoop<T>& phi, double tol = kDefaultTol) {
    auto p = phi.pruned(tol);
    UnitonNumber u;
    u.value = p.dmax() - p.dmin();
    const int n = p.order();
    if (n < 6) return u;
    JetSubbundle<T> L;
    try {
        L = JetSubbundle<T>::span(p.coeff(p.dmin()), tol);
    } catch (const RankDrop&) {
        return u;
    }
    std::vector<Vec7<T>> osc;
    for (auto s : L.sections())
        for (int k = 0; k <= 6; ++k) {
            osc.push_back(s.eval0());
            if (k < 6) s = dz(s);
        }
    Mat<T> M(7, int(osc.size()));
    for (size_t j = 0; j < osc.size(); ++j)
        for (int i = 0; i < 7; ++i) M(i, int(j)) = osc[j][i];
    u.exact = g2t::rank(M, tol) == 7;
    return u;
}

// Real-pair unitons (α₁, …, α_k) with Φ = P_{α₁} ⋯ P_{α_k}; the last is Im of the adjoint of the lowest coefficient.
template <class T>
std::vector<JetSubbundle<T>> alternating_factorization(MatrixLoop<T> phi, double tol = kDefaultTol) {
    std::vector<JetSubbundle<T>> out;
    phi = phi.pruned(tol);
    while (phi.dmin() < 0) {
        const int span = phi.dmax() - phi.dmin();
        auto a = JetSubbundle<T>::span(phi.coeff(phi.dmin()).adjoint(), tol);
        phi = (phi * uniton_factor(a).adjoint()).pruned(tol);
        if (phi.dmax() - phi.dmin() != span - 2) throw ContainmentError("alternating_factorization: degree did not drop");
        out.insert(out.begin(), a);
    }
    if (phi.dmax() != 0) throw ContainmentError("alternating_factorization: loop is not balanced");
    return out;
}

// W of the S¹-invariant loop of a flag: Σ_k λ^k (ψ_{≤k}).
template <class T>
GrassModel<T> s1_limit_model(const Flag<T>& f, double tol = kDefaultTol) {
    const int n = f.order();
    std::vector<LoopVec<T>> gens;
    for (int i = f.lo; i <= f.hi(); ++i)
        for (auto& v : f.leg(i).truncated(n).sections()) gens.push_back(LoopVec<T>::mono(i, v));
    auto W = echelon_model(gens, f.hi(), tol);
    W.phi = s1_invariant_loop(f);
    return W;
}

// The S¹-invariant W written through the lift data: W for s = 1, ℓ for s = 2, ℓ and D for s = 3.
template <class T>
GrassModel<T> s1_limit_from_lift(const Lift<T>& L, double tol = kDefaultTol) {
    const int n = L.flag.order();
    std::vector<LoopVec<T>> gens;
    auto add = [&](int k, const JetSubbundle<T>& V) {
        for (auto& v : V.truncated(n).sections()) gens.push_back(LoopVec<T>::mono(k, v));
    };
    auto whole = JetSubbundle<T>::whole(n);
    if (L.s == 1) {
        add(-1, L.W.conj());
        add(0, L.W.complement());
    } else {
        auto la = annihilator(L.ell);
        int k = -L.s;
        add(k++, L.ell.conj());
        if (L.s == 3) add(k++, L.D.conj());
        add(k++, la.conj());
        add(k++, la.complement());
        if (L.s == 3) add(k++, L.D.complement());
        add(k++, L.ell.complement());
    }
    add(L.s, whole);
    auto W = echelon_model(gens, L.s, tol);
    W.phi = s1_invariant_loop(L.flag);
    return W;
}

// Φ = (λ⁻¹π_A + π_f + λπ_Ā)(λ⁻¹π_α + π_{(α⊕ᾱ)⊥} + λπ_ᾱ), A = h ⊕ G⁽¹⁾(h) ⊕ G⁽²⁾(h),
// α spanned by H₀ + t(a H₄ + b Ĥ₅).
template <class T>
MatrixLoop<T> uniton_pair_loop(const Q5Curve& h, const T& z0, int order, const Jet<T>& a, const Jet<T>& b, const T& t,
                             double tol = kDefaultTol) {
    Flag<T> f = q5_harmonic_flag(h, z0, order, tol);
    auto A = f.leg(-3) + f.leg(-2) + f.leg(-1);
    auto alpha = example_s2_alpha(h, z0, order, t * a, t * b, tol);
    int n = std::min(A.order(), alpha.order());
    return uniton_factor(A.truncated(n)) * uniton_factor(alpha);
}

// W = X + λX₍₁₎ + … + λ⁵X₍₅₎ + λ³H₊ with X = λ⁻³ span{H + tλ⁴ b H⁽⁵⁾}.
template <class T>
GrassModel<T> osculating_model(const Q5Curve& h, const T& z0, int order, const Jet<T>& b, const T& t,
                              double tol = kDefaultTol) {
    if (b.order() < order + 5) throw JetOrderError("osculating_model: b needs jet order ≥ order + 5");
    if (!b.is_holomorphic()) throw PreconditionError("osculating_model: b must be holomorphic");
    JetVec7<T> H = q5_base_section(h, z0, order + 10);
    JetVec7<T> H5 = H;
    for (int k = 0; k < 5; ++k) H5 = dz(H5);
    LoopVec<T> sigma;
    sigma.c[-3] = H.truncated(order + 5);
    sigma.c[1] = t * (b.truncated(order + 5) * H5.truncated(order + 5));
    std::vector<LoopVec<T>> gens;
    for (int k = 0; k <= 5; ++k) {
        gens.push_back(sigma.truncated(order).shifted(k));
        for (auto& [d, v] : sigma.c) v = dz(v);
    }
    for (int j = 0; j < 7; ++j) gens.push_back(LoopVec<T>::mono(3, JetVec7<T>::constant(Vec7<T>::basis(j), order)));
    auto W = echelon_model(gens, 3, tol);
    W.phi = loop_from_model(W);
    return W;
}

template <class T>
MatrixLoop<T> osculating_loop(const Q5Curve& h, const T& z0, int order, const Jet<T>& b, const T& t,
                             double tol = kDefaultTol) {
    return *osculating_model(h, z0, order, b, t, tol).phi;
}

}  // namespace g2t

#pragma once
#include "g2t/jet.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace g2t {

struct GramSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RankDrop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
bool negligible(const JetMatrix<T>& m, double tol, double scale = 1.0) {
    if constexpr (is_exact_v<T>) return m.is_zero(0.0);
    else return m.max_abs() <= tol * std::max(1.0, scale);
}
template <class T>
bool negligible(const JetVec7<T>& v, double tol, double scale = 1.0) {
    if constexpr (is_exact_v<T>) return v.is_zero(0.0);
    else return v.max_abs() <= tol * std::max(1.0, scale);
}
template <class T>
bool negligible(const Jet<T>& v, double tol, double scale = 1.0) {
    if constexpr (is_exact_v<T>) return v.is_zero(0.0);
    else return v.max_abs() <= tol * std::max(1.0, scale);
}

template <class T>
class JetSubbundle {
public:
    JetSubbundle() = default;

    // Frame columns must be independent at the base point.
    static JetSubbundle from_frame(const JetMatrix<T>& S, double tol = kDefaultTol) {
        JetSubbundle b;
        b.tol_ = tol;
        b.S_ = S;
        const int n = S.order();
        if (S.cols() == 0) {
            b.P_ = JetMatrix<T>(7, 7, n);
            return b;
        }
        if (g2t::rank(S.eval0(), tol) != S.cols()) throw GramSingular("frame is degenerate at the base point");
        JetMatrix<T> Sn = S;
        if constexpr (!is_exact_v<T>) {
            // unitary at the base point, so the Gram jet is a small perturbation of I
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(detail::to_eigen(S.eval0()));
            Eigen::MatrixXcd R = qr.matrixQR().topRows(S.cols()).template triangularView<Eigen::Upper>();
            Sn = S * JetMatrix<T>::constant(detail::from_eigen(R.inverse()), n);
        }
        JetMatrix<T> St = Sn.adjoint();
        JetMatrix<T> G = St * Sn;
        JetMatrix<T> Ginv;
        try {
            Ginv = G.inverse(tol * tol);
        } catch (const SingularMatrix&) {
            throw GramSingular("Gram matrix singular at the base point");
        }
        b.P_ = Sn * Ginv * St;
        return b;
    }
    static JetSubbundle from_sections(const std::vector<JetVec7<T>>& secs, int order, double tol = kDefaultTol) {
        return span(JetMatrix<T>::from_cols(secs, order), tol);
    }

    // Image of the columns near the base point; the rank must be locally constant.
    static JetSubbundle span(const JetMatrix<T>& M, double tol = kDefaultTol) {
        auto piv = pivot_columns(M.eval0(), tol);
        std::sort(piv.begin(), piv.end());
        JetSubbundle b = from_frame(M.cols_at(piv), tol);
        if (M.cols() > 0) {
            JetMatrix<T> R = (JetMatrix<T>::identity(7, b.order()) - b.P_) * M;
            if (!negligible(R, tol, M.max_abs()))
                throw RankDrop("rank of spanning family is not constant near the base point");
        }
        return b;
    }
    static JetSubbundle zero(int order) { return from_frame(JetMatrix<T>(7, 0, order)); }
    static JetSubbundle whole(int order) { return from_frame(JetMatrix<T>::identity(7, order)); }
    static JetSubbundle constant(const Subspace<T>& V, int order) {
        JetMatrix<T> S(7, V.rank(), order);
        for (int j = 0; j < V.rank(); ++j)
            for (int i = 0; i < 7; ++i) S(i, j) = Jet<T>::constant(V[j][i], order);
        return from_frame(S);
    }

    int rank() const { return S_.cols(); }
    int order() const { return std::min(S_.order(), P_.order()); }
    double tol() const { return tol_; }
    const JetMatrix<T>& frame() const { return S_; }
    JetVec7<T> section(int j) const { return S_.col(j); }
    std::vector<JetVec7<T>> sections() const { return S_.columns(); }
    const JetMatrix<T>& projector() const { return P_; }
    JetMatrix<T> perp_projector() const { return JetMatrix<T>::identity(7, P_.order()) - P_; }

    JetVec7<T> project(const JetVec7<T>& v) const { return P_.apply(v); }
    JetVec7<T> project_perp(const JetVec7<T>& v) const { return v - P_.apply(v).truncated(std::min(v.order(), P_.order())); }

    Subspace<T> eval0() const { return Subspace<T>::from_matrix(S_.eval0(), tol_); }

    JetSubbundle truncated(int n) const {
        JetSubbundle b = *this;
        b.S_ = S_.truncated(n);
        b.P_ = P_.truncated(n);
        return b;
    }
    JetSubbundle complement() const { return span(perp_projector(), tol_); }
    JetSubbundle conj() const { return from_frame(S_.conj_entries(), tol_); }

    bool contains(const JetVec7<T>& v) const {
        int n = std::min(order(), v.order());
        return negligible(truncated(n).project_perp(v.truncated(n)), tol_, v.max_abs());
    }
    bool contains(const JetSubbundle& o) const {
        for (int j = 0; j < o.rank(); ++j)
            if (!contains(o.section(j))) return false;
        return true;
    }
    bool is_orthogonal_to(const JetSubbundle& o) const {
        int n = std::min(order(), o.order());
        return negligible(P_.truncated(n) * o.P_.truncated(n), tol_);
    }
    bool is_isotropic() const {
        for (int i = 0; i < rank(); ++i)
            for (int j = 0; j < rank(); ++j) {
                auto si = section(i), sj = section(j);
                if (!negligible(dot(si, sj), tol_, si.max_abs() * sj.max_abs())) return false;
            }
        return true;
    }
    bool is_real() const { return same(*this, conj()); }

    friend bool same(const JetSubbundle& a, const JetSubbundle& b) {
        return a.rank() == b.rank() && a.contains(b);
    }
    friend JetSubbundle operator+(const JetSubbundle& a, const JetSubbundle& b) {
        return span(a.S_.hcat(b.S_), a.tol_);
    }
    friend JetSubbundle intersect(const JetSubbundle& a, const JetSubbundle& b) {
        return (a.complement() + b.complement()).complement();
    }
    // a ⊖ b, with b ⊆ a.
    friend JetSubbundle ominus(const JetSubbundle& a, const JetSubbundle& b) {
        int n = std::min(a.order(), b.order());
        return span(b.truncated(n).perp_projector() * a.S_.truncated(n), a.tol_);
    }

private:
    JetMatrix<T> S_{7, 0, 0};
    JetMatrix<T> P_{7, 7, 0};
    double tol_ = kDefaultTol;
};

template <class T>
JetSubbundle<T> image(const JetMatrix<T>& A, const JetSubbundle<T>& U) {
    int n = std::min(A.order(), U.order());
    return JetSubbundle<T>::span(A.truncated(n) * U.frame().truncated(n), U.tol());
}

template <class T>
JetSubbundle<T> kernel(const JetMatrix<T>& A, double tol = kDefaultTol) {
    return JetSubbundle<T>::span(A.adjoint(), tol).complement();
}

template <class T>
JetMatrix<T> cross_jetmatrix(const JetVec7<T>& b) {
    JetMatrix<T> m(7, 7, b.order());
    for (int j = 0; j < 7; ++j) {
        auto col = cross(JetVec7<T>::constant(Vec7<T>::basis(j), b.order()), b);
        for (int i = 0; i < 7; ++i) m(i, j) = col[i];
    }
    return m;
}

template <class T>
JetSubbundle<T> annihilator(const JetSubbundle<T>& beta) {
    const int n = beta.order();
    if (beta.rank() == 0) return JetSubbundle<T>::whole(n);
    JetMatrix<T> stacked(7, 0, n);
    for (auto& b : beta.sections()) stacked = stacked.hcat(cross_jetmatrix(b).adjoint());
    return JetSubbundle<T>::span(stacked, beta.tol()).complement();
}

// A_z^φ = (2π_φ − I) ∂_z π_φ, equal to −(A'_φ ⊕ A'_{φ⊥}).
template <class T>
JetMatrix<T> az_matrix(const JetSubbundle<T>& phi) {
    const auto& P = phi.projector();
    JetMatrix<T> dP = dz(P);
    const int n = dP.order();
    JetMatrix<T> R = T(2) * P.truncated(n) - JetMatrix<T>::identity(7, n);
    return R * dP;
}
template <class T>
JetMatrix<T> azbar_matrix(const JetSubbundle<T>& phi) {
    const auto& P = phi.projector();
    JetMatrix<T> dP = dzbar(P);
    const int n = dP.order();
    JetMatrix<T> R = T(2) * P.truncated(n) - JetMatrix<T>::identity(7, n);
    return R * dP;
}
template <class T>
JetVec7<T> az(const JetSubbundle<T>& phi, const JetVec7<T>& v) {
    return az_matrix(phi).apply(v);
}

enum class Dir { Z, Zbar };

// A'_{φ,ψ}(v) = π_ψ(∂_z v), A''_{φ,ψ}(v) = π_ψ(∂_z̄ v).
template <class T>
JetVec7<T> sff(const JetSubbundle<T>& phi, const JetSubbundle<T>& psi, const JetVec7<T>& v, Dir dir) {
    if (!phi.is_orthogonal_to(psi)) throw PreconditionError("sff: subbundles are not orthogonal");
    if (!phi.contains(v)) throw PreconditionError("sff: v is not a section of φ");
    JetVec7<T> d = dir == Dir::Z ? dz(v) : dzbar(v);
    return psi.projector().apply(d);
}

// Matrix of A'_{φ,ψ} on the frame of φ, returned as π_ψ ∂ S_φ (7 × rank φ).
template <class T>
JetMatrix<T> sff_frame(const JetSubbundle<T>& phi, const JetSubbundle<T>& psi, Dir dir = Dir::Z) {
    JetMatrix<T> d = dir == Dir::Z ? dz(phi.frame()) : dzbar(phi.frame());
    int n = std::min(d.order(), psi.order());
    return psi.projector().truncated(n) * d.truncated(n);
}

template <class T>
JetSubbundle<T> gauss_transform(const JetSubbundle<T>& phi, Dir dir) {
    JetMatrix<T> d = dir == Dir::Z ? dz(phi.frame()) : dzbar(phi.frame());
    int n = d.order();
    return JetSubbundle<T>::span(phi.truncated(n).perp_projector() * d, phi.tol());
}

// G^{(i)}(φ) for i = 0..imax (negative i via conjugate direction when imax < 0).
template <class T>
std::vector<JetSubbundle<T>> harmonic_sequence(const JetSubbundle<T>& phi, int imax) {
    std::vector<JetSubbundle<T>> seq{phi};
    Dir dir = imax >= 0 ? Dir::Z : Dir::Zbar;
    for (int i = 0; i < std::abs(imax); ++i) {
        if (seq.back().rank() == 0) {
            seq.push_back(JetSubbundle<T>::zero(std::max(seq.back().order() - 1, 0)));
            continue;
        }
        seq.push_back(gauss_transform(seq.back(), dir));
    }
    return seq;
}

// ∂_z̄ A_z + [A_z̄, A_z]; vanishes identically iff φ is harmonic.
template <class T>
JetMatrix<T> harmonicity_residual(const JetSubbundle<T>& phi) {
    if (phi.order() < 2) throw JetOrderError("is_harmonic: jet order must be at least 2");
    JetMatrix<T> A = az_matrix(phi), B = azbar_matrix(phi);
    JetMatrix<T> dA = dzbar(A);
    const int n = dA.order();
    A = A.truncated(n);
    B = B.truncated(n);
    return dA + B * A - A * B;
}

template <class T>
bool is_harmonic(const JetSubbundle<T>& phi) {
    return negligible(harmonicity_residual(phi), phi.tol());
}

template <class T>
JetMatrix<T> matrix_power(const JetMatrix<T>& A, int r) {
    JetMatrix<T> M = JetMatrix<T>::identity(A.rows(), A.order());
    for (int k = 0; k < r; ++k) M = M * A;
    return M;
}

// Least r ≤ 7 with (A_z)^r ≡ 0, if any.
template <class T>
std::optional<int> nilorder(const JetSubbundle<T>& phi) {
    JetMatrix<T> A = az_matrix(phi);
    JetMatrix<T> M = JetMatrix<T>::identity(7, A.order());
    const double a = std::max(1.0, A.max_abs());
    for (int r = 1; r <= 7; ++r) {
        M = M * A;
        if (negligible(M, phi.tol(), std::pow(a, r))) return r;
    }
    return std::nullopt;
}

// Least s with (A_z)^{2s} killing φ (s odd) or φ⊥ (s even).
template <class T>
std::optional<int> s_invariant(const JetSubbundle<T>& phi, int smax = 4) {
    JetMatrix<T> A = az_matrix(phi);
    const int n = A.order();
    JetMatrix<T> P = phi.projector().truncated(n), Q = phi.perp_projector().truncated(n);
    JetMatrix<T> A2 = A * A;
    JetMatrix<T> M = A2;
    const double a = std::max(1.0, A.max_abs());
    for (int s = 1; s <= smax; ++s) {
        if (negligible(M * (s % 2 ? P : Q), phi.tol(), std::pow(a, 2 * s))) return s;
        M = M * A2;
    }
    return std::nullopt;
}

// Z₀ ⊇ Z₁ ⊇ … ⊇ Z_t ⊋ 0 with legs ψᵢ = Zᵢ ⊖ Z_{i+1}.
template <class T>
struct Filtration {
    std::vector<JetSubbundle<T>> chain;
    std::vector<JetSubbundle<T>> legs() const {
        std::vector<JetSubbundle<T>> out;
        for (size_t i = 0; i < chain.size(); ++i) {
            if (i + 1 < chain.size()) out.push_back(ominus(chain[i], chain[i + 1]));
            else out.push_back(chain[i]);
        }
        return out;
    }
};

template <class T>
Filtration<T> filtration_by_images(const JetSubbundle<T>& phi) {
    auto r = nilorder(phi);
    if (!r) throw PreconditionError("filtration: map is not nilconformal");
    JetMatrix<T> A = az_matrix(phi);
    Filtration<T> F;
    JetMatrix<T> M = JetMatrix<T>::identity(7, A.order());
    for (int i = 0; i < *r; ++i) {
        F.chain.push_back(JetSubbundle<T>::span(M, phi.tol()));
        M = M * A;
    }
    return F;
}

template <class T>
Filtration<T> filtration_by_kernels(const JetSubbundle<T>& phi) {
    auto r = nilorder(phi);
    if (!r) throw PreconditionError("filtration: map is not nilconformal");
    JetMatrix<T> A = az_matrix(phi);
    Filtration<T> F;
    for (int i = 0; i < *r; ++i) {
        JetMatrix<T> M = matrix_power(A, *r - i);
        F.chain.push_back(kernel(M, phi.tol()));
    }
    return F;
}

// D_z̄^φ = ∂_z̄ + A_z̄^φ preserves β.
template <class T>
bool is_dzbar_holomorphic(const JetSubbundle<T>& beta, const JetSubbundle<T>& phi) {
    if (beta.rank() == 0) return true;
    JetMatrix<T> B = azbar_matrix(phi);
    JetMatrix<T> S = beta.frame();
    JetMatrix<T> dS = dzbar(S);
    int n = std::min(dS.order(), B.order());
    JetMatrix<T> D = dS.truncated(n) + B.truncated(n) * S.truncated(n);
    JetMatrix<T> R = beta.truncated(n).perp_projector() * D;
    return negligible(R, beta.tol(), S.max_abs());
}

// Each Zᵢ is D_z̄-holomorphic and A_z Zᵢ ⊆ Z_{i+1}.
template <class T>
bool is_A_filtration(const Filtration<T>& F, const JetSubbundle<T>& phi) {
    JetMatrix<T> A = az_matrix(phi);
    for (size_t i = 0; i < F.chain.size(); ++i) {
        const auto& Z = F.chain[i];
        if (!is_dzbar_holomorphic(Z, phi)) return false;
        JetSubbundle<T> next = i + 1 < F.chain.size() ? F.chain[i + 1] : JetSubbundle<T>::zero(Z.order());
        int n = std::min({A.order(), Z.order(), next.order()});
        JetMatrix<T> img = A.truncated(n) * Z.frame().truncated(n);
        if (!negligible(next.truncated(n).perp_projector() * img, phi.tol(), Z.frame().max_abs())) return false;
    }
    return true;
}

}  // namespace g2t

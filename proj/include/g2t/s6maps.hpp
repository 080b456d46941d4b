#pragma once
#include "g2t/twistor.hpp"

#include <cmath>
#include <numbers>

namespace g2t {

struct TotallyGeodesicS2 : PreconditionError {
    using PreconditionError::PreconditionError;
};

// F: M → S⁶ as a jet of a real unit vector.
template <class T>
struct ACMap {
    JetVec7<T> F;
    double tol = kDefaultTol;

    int order() const { return F.order(); }
    JetSubbundle<T> line() const { return JetSubbundle<T>::from_sections({F}, F.order(), tol); }
    bool is_real() const { return negligible(F - conj(F), tol); }
    bool is_unit() const {
        return negligible(dot(F, F) - Jet<T>::constant(scalar_traits<T>::one(), F.order()), tol);
    }
    // F × F_z = i F_z
    bool is_almost_complex() const {
        JetVec7<T> Fz = dz(F);
        JetVec7<T> r = cross(F.truncated(Fz.order()), Fz) - scalar_traits<T>::i() * Fz;
        return negligible(r, tol, std::max(1.0, Fz.max_abs()));
    }
    bool is_constant() const { return negligible(dz(F), tol); }
};

// T^{1,0}_F S⁶ = {v ⊥ F : F × v = i v}, the image of ½(I − i F×) − ½ F Fᵀ.
template <class T>
JetSubbundle<T> tangent10(const ACMap<T>& m) {
    const int n = m.order();
    JetMatrix<T> J = T(-1) * cross_jetmatrix(m.F);  // v ↦ F × v
    JetMatrix<T> FF(7, 7, n);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) FF(i, j) = m.F[i] * m.F[j];
    T half = scalar_traits<T>::one() / scalar_traits<T>::from_int(2);
    JetMatrix<T> P = half * (JetMatrix<T>::identity(7, n) - scalar_traits<T>::i() * J - FF);
    return JetSubbundle<T>::span(P, m.tol);
}

// π_{V ⊖ α} ∂_z̄ L ≡ 0 for a frame section L of α ⊆ V.
template <class T>
bool is_holomorphic_in(const JetSubbundle<T>& alpha, const JetSubbundle<T>& V) {
    JetMatrix<T> d = dzbar(alpha.frame());
    const int n = d.order();
    JetMatrix<T> R = (V.projector().truncated(n) - alpha.projector().truncated(n)) * d;
    return negligible(R, alpha.tol(), std::max(1.0, alpha.frame().max_abs()));
}

// X + gY with ∂_z̄ g = −ρ, where π_V ∂_z̄ X = ρ Y and Y is a holomorphic section of V.
template <class T>
JetVec7<T> holomorphic_completion(const JetSubbundle<T>& V, const JetVec7<T>& X, const JetVec7<T>& Y) {
    JetVec7<T> d = V.project(dzbar(X));
    const int n = d.order();
    Jet<T> rho = herm(d, Y.truncated(n)) * herm(Y, Y).truncated(n).inverse();
    Jet<T> g = -integrate_zbar(rho);
    JetVec7<T> out = X.truncated(g.order()) + g * Y.truncated(g.order());
    return out;
}

// F_i = A'_{G^{(i−1)}(f)}(F_{i−1}), i = 0..k; each step loses one jet order.
template <class T>
std::vector<JetVec7<T>> gauss_sections(const JetVec7<T>& F0, int k) {
    std::vector<JetVec7<T>> out{F0};
    for (int i = 1; i <= k; ++i) {
        const JetVec7<T>& p = out.back();
        JetVec7<T> d = dz(p);
        JetVec7<T> q = p.truncated(d.order());
        Jet<T> nrm = herm(q, q);
        if (scalar_traits<T>::is_zero(nrm.eval0(), 0.0)) {
            out.push_back(JetVec7<T>(d.order()));
            continue;
        }
        out.push_back(d - (herm(d, q) * nrm.inverse()) * q);
    }
    return out;
}

// The 7-leg G₂-flag of a non-constant almost complex map with F₂ ≢ 0.
template <class T>
Flag<T> ac_flag(const ACMap<T>& m) {
    if (m.order() < 3) throw JetOrderError("ac_flag: needs jet order ≥ 3");
    auto Fs = gauss_sections(m.F, 2);
    if (Fs[1].eval0().is_zero(m.tol)) throw PreconditionError("ac_flag: F is constant to first order");
    if (Fs[2].eval0().is_zero(m.tol)) throw TotallyGeodesicS2("ac_flag: F₂ vanishes; F lies in a totally geodesic S²");
    const int n = Fs[2].order();
    JetVec7<T> F1 = Fs[1].truncated(n), F2 = Fs[2];
    JetVec7<T> F3 = cross(F1, F2);
    std::vector<JetVec7<T>> secs{conj(F3), conj(F2), conj(F1), m.F.truncated(n), F1, F2, F3};
    Flag<T> f;
    f.lo = -3;
    for (auto& s : secs) f.legs.push_back(JetSubbundle<T>::from_sections({s}, n, m.tol));
    return f;
}

// φ = ᾱ ⊕ f ⊕ α for a holomorphic line α ⊆ F⁻¹T^{1,0}S⁶.
template <class T>
JetSubbundle<T> add_uniton_pair(const ACMap<T>& m, const JetSubbundle<T>& alpha) {
    if (alpha.rank() != 1) throw PreconditionError("add_uniton_pair: α must be a line");
    JetSubbundle<T> T10 = tangent10(m);
    int n = std::min(T10.order(), alpha.order());
    JetSubbundle<T> a = alpha.truncated(n), V = T10.truncated(n);
    if (!V.contains(a)) throw PreconditionError("add_uniton_pair: α is not in T^{1,0}");
    if (!is_holomorphic_in(a, V)) throw PreconditionError("add_uniton_pair: α is not holomorphic");
    return a.conj() + m.line().truncated(n) + a;
}

enum class LineChoice { GppPerp, GpPerp };

// F = i L̄ × L / |L|², L spanning G''(φ⊥) (round-trips) or G'(φ⊥) (gives −F).
template <class T>
ACMap<T> acmap_from_phi(const JetSubbundle<T>& phi, LineChoice choice = LineChoice::GppPerp) {
    JetMatrix<T> A = az_matrix(phi);
    if (!negligible(A * A, phi.tol(), std::max(1.0, A.max_abs() * A.max_abs())))
        throw PreconditionError("acmap_from_phi: φ or φ⊥ is not strongly conformal");
    const int n = A.order();
    JetSubbundle<T> ph = phi.truncated(n);
    if (image(A, ph).rank() != 1) throw PreconditionError("acmap_from_phi: rank G'(φ) ≠ 1");
    JetMatrix<T> B = choice == LineChoice::GppPerp ? azbar_matrix(phi) : A;
    JetSubbundle<T> alpha = image(B, ph.complement());
    if (alpha.rank() != 1) throw RankDrop("acmap_from_phi: Gauss bundle of φ⊥ is not a line");
    JetVec7<T> L = alpha.section(0);
    ACMap<T> out;
    out.tol = phi.tol();
    out.F = scalar_traits<T>::i() * (herm(L, L).inverse() * cross(conj(L), L));
    if (out.is_constant()) throw PreconditionError("acmap_from_phi: G'(φ⊥) × G''(φ⊥) is constant");
    return out;
}

// φ = G''(f) ⊕ f ⊕ G'(f).
template <class T>
JetSubbundle<T> phi_from_acmap(const ACMap<T>& m) {
    auto Fs = gauss_sections(m.F, 1);
    const int n = Fs[1].order();
    return JetSubbundle<T>::from_sections({conj(Fs[1]), m.F.truncated(n), Fs[1]}, n, m.tol);
}

// φ = ψ₋₃ ⊕ f ⊕ ψ₃; G'(φ) = ψ₁ ⊕ ψ₋₂ has rank 2.
template <class T>
JetSubbundle<T> rank2_construction(const ACMap<T>& m) {
    Flag<T> f = ac_flag(m);
    return f.leg(-3) + f.leg(0) + f.leg(3);
}

enum class ACType { I, II, III, IV };

// Best-effort type at the base point, decided from the jet (order-limited).
template <class T>
ACType classify(const ACMap<T>& m) {
    Flag<T> f;
    try {
        f = ac_flag(m);
    } catch (const TotallyGeodesicS2&) {
        return ACType::IV;
    }
    if (sff_vanishes(f, 2, -3) && sff_vanishes(f, 3, -2)) return ACType::I;
    // F confined to a hyperplane: its derivatives miss a fixed direction
    std::vector<Vec7<T>> vals;
    for (int d = 0; d <= m.order(); ++d)
        for (int q = 0; q <= d; ++q) {
            Vec7<T> v;
            for (int k = 0; k < 7; ++k) v[k] = m.F[k].at(d - q, q);
            vals.push_back(v);
        }
    Mat<T> M(7, int(vals.size()));
    for (int j = 0; j < int(vals.size()); ++j)
        for (int i = 0; i < 7; ++i) M(i, j) = vals[size_t(j)][i];
    return rank(M, m.tol) <= 6 ? ACType::III : ACType::II;
}

inline const char* type_name(ACType t) {
    switch (t) {
        case ACType::I: return "I";
        case ACType::II: return "II";
        case ACType::III: return "III";
        default: return "IV";
    }
}

// Holomorphic curve in the quadric, stored as polynomial coefficients in z.
struct Q5Curve {
    std::vector<Vec7<QI>> coeffs;

    int degree() const { return int(coeffs.size()) - 1; }

    template <class T>
    JetVec7<T> jet(const T& z0, int order) const {
        JetVec7<T> H(order);
        for (int k = 0; k < 7; ++k) {
            std::vector<T> c;
            for (auto& v : coeffs) c.push_back(scalar_traits<T>::from_qi(v[k]));
            H[k] = jet_of_polynomial(c, z0, order);
        }
        return H;
    }
};

// Curves g₀ exp(zE) ℓ_{−2α₁−α₂} with E in the grade-one part of the s = 3 grading.
// id 0 has g₀ = 1; other ids draw g₀ and E from a generator seeded by id.
Q5Curve superhorizontal_poly(int id);
// ℓ_{−2α₁−α₂} + z ℓ_{α₁}: holomorphic and isotropic, not superhorizontal.
Q5Curve non_superhorizontal_q5();

// H·H = 0 and H × H′ = 0, checked as exact polynomial identities.
bool is_q5_isotropic(const Q5Curve& h);
bool superhorizontal_q5_check(const Q5Curve& h);
// H, H′, …, H⁽⁶⁾ independent at z0.
bool is_full(const Q5Curve& h, const QI& z0);

template <class T>
JetVec7<T> q5_base_section(const Q5Curve& h, const T& z0, int order) {
    JetVec7<T> H = h.jet(z0, order);
    if (H.eval0().is_zero(0.0)) throw PreconditionError("Q5Curve: H vanishes at the base point");
    return H;
}

// Legs ψ_i = G^{(3+i)}(h), i = −3..3, from the osculating spaces of H.
template <class T>
Flag<T> q5_harmonic_flag(const Q5Curve& h, const T& z0, int order, double tol = kDefaultTol) {
    JetVec7<T> H = q5_base_section(h, z0, order + 6);
    std::vector<JetVec7<T>> ders{H};
    for (int k = 1; k <= 6; ++k) ders.push_back(dz(ders.back()));
    std::vector<JetSubbundle<T>> chain;
    std::vector<JetVec7<T>> acc;
    for (auto& d : ders) {
        acc.push_back(d.truncated(order));
        JetMatrix<T> S = JetMatrix<T>::from_cols(acc, order);
        if (g2t::rank(S.eval0(), tol) != int(acc.size())) throw RankDrop("q5_harmonic_flag: h is not full at the base point");
        chain.push_back(JetSubbundle<T>::from_frame(S, tol));
    }
    return flag_from_filtration(-3, chain);
}

// H_i = A'_{G^{(i−1)}(h)}(H_{i−1}), holomorphic sections of G^{(i)}(h).
template <class T>
std::vector<JetVec7<T>> q5_gauss_sections(const Q5Curve& h, const T& z0, int order) {
    JetVec7<T> H = q5_base_section(h, z0, order + 6);
    auto Hs = gauss_sections(H, 6);
    for (auto& x : Hs) x = x.truncated(order);
    return Hs;
}

// F = i H̄ × H / |H|²
template <class T>
ACMap<T> bryant_map(const Q5Curve& h, const T& z0, int order, double tol = kDefaultTol) {
    JetVec7<T> H = q5_base_section(h, z0, order);
    ACMap<T> m;
    m.tol = tol;
    m.F = scalar_traits<T>::i() * (herm(H, H).inverse() * cross(conj(H), H));
    return m;
}

// φ = G^{(−i)}(f) ⊕ f ⊕ G^{(i)}(f), f = G^{(3)}(h).
template <class T>
JetSubbundle<T> three_map_family(const Q5Curve& h, int i, const T& z0, int order, double tol = kDefaultTol) {
    if (i < 1 || i > 3) throw PreconditionError("three_map_family: i must be 1, 2 or 3");
    Flag<T> f = q5_harmonic_flag(h, z0, order, tol);
    return f.leg(-i) + f.leg(0) + f.leg(i);
}

// α spanned by H₀ + a H₄ + b Ĥ₅, Ĥ₅ the holomorphic completion of H₅ inside T^{1,0}.
template <class T>
JetSubbundle<T> example_s2_alpha(const Q5Curve& h, const T& z0, int order, const Jet<T>& a, const Jet<T>& b,
                                 double tol = kDefaultTol) {
    auto Hs = q5_gauss_sections(h, z0, order + 1);
    ACMap<T> m = bryant_map(h, z0, order + 1, tol);
    JetSubbundle<T> T10 = tangent10(m);
    JetVec7<T> H5 = holomorphic_completion(T10, Hs[5], Hs[4]);
    int n = std::min({order, a.order(), b.order()});
    JetVec7<T> L = Hs[0].truncated(n) + a.truncated(n) * Hs[4].truncated(n) + b.truncated(n) * H5.truncated(n);
    return JetSubbundle<T>::from_sections({L}, n, tol);
}

// φ = ᾱ ⊕ f ⊕ α with α ⊆ h ⊕ G⁽⁴⁾(h) ⊕ G⁽⁵⁾(h), in neither h nor G⁽⁴⁾ ⊕ G⁽⁵⁾.
template <class T>
JetSubbundle<T> example_s2_map(const Q5Curve& h, const T& z0, const JetSubbundle<T>& alpha, double tol = kDefaultTol) {
    const int n = alpha.order();
    Flag<T> f = q5_harmonic_flag(h, z0, n, tol);
    Subspace<T> a0 = alpha.eval0();
    if (f.leg(-3).eval0().contains(a0)) throw PreconditionError("example_s2_map: α lies in h");
    if ((f.leg(1) + f.leg(2)).eval0().contains(a0)) throw PreconditionError("example_s2_map: α lies in G⁽⁴⁾ ⊕ G⁽⁵⁾");
    ACMap<T> m = bryant_map(h, z0, n, tol);
    return add_uniton_pair(m, alpha);
}

// Type IV: inverse stereographic projection into the associative S² ⊂ span{e₁, e₂, e₃}.
template <class T>
ACMap<T> geodesic_s2_map(const T& z0, int order, double tol = kDefaultTol) {
    Jet<T> z = Jet<T>::z(order) + Jet<T>::constant(z0, order);
    Jet<T> zb = Jet<T>::zbar(order) + Jet<T>::constant(sconj(z0), order);
    Jet<T> one = Jet<T>::constant(scalar_traits<T>::one(), order);
    Jet<T> inv = (one + z * zb).inverse();
    ACMap<T> m;
    m.tol = tol;
    m.F = JetVec7<T>(order);
    m.F[0] = inv * (z + zb);
    m.F[1] = inv * (scalar_traits<T>::i() * (zb - z));
    m.F[2] = inv * (one - z * zb);
    return m;
}

// Constant F = e₁ with α = span{p₁u₁ + p₂u₂ + p₃u₃}, (u_k) a basis of T^{1,0}.
template <class T>
std::pair<ACMap<T>, JetSubbundle<T>> fconst_example(const std::array<std::vector<QI>, 3>& polys, const T& z0,
                                                   int order, double tol = kDefaultTol) {
    auto wb = build_weight_basis<T>();
    std::array<Vec7<T>, 3> u{wb[Weight{1, 0}], wb[Weight{1, 1}], wb[Weight{-2, -1}]};
    JetVec7<T> L(order);
    for (int k = 0; k < 3; ++k) {
        std::vector<T> c;
        for (auto& q : polys[size_t(k)]) c.push_back(scalar_traits<T>::from_qi(q));
        L = L + jet_of_polynomial(c, z0, order) * JetVec7<T>::constant(u[size_t(k)], order);
    }
    ACMap<T> m;
    m.tol = tol;
    m.F = JetVec7<T>::constant(Vec7<T>::basis(0), order);
    return {m, JetSubbundle<T>::from_sections({L}, order, tol)};
}

// Doubly periodic vacuum solution in the S⁵ orthogonal to ℓ₀ (float backend only).
// μ_j = 2i ω^{j−1} gives the periods π and iπ/√3.
ACMap<cplx> vacuum_torus(cplx z0, int order, double tol = kDefaultTol);
// v₁ ∈ ℓ_{α₁}, v₂ ∈ ℓ_{α₁+α₂}, v₃ = conj(v₁ × v₂), each of norm 1/√2.
std::array<Vec7<cplx>, 3> torus_vectors();
std::array<cplx, 3> torus_exponents();
// Evaluate the torus map at a point (no jets).
Vec7<cplx> vacuum_torus_value(cplx z);

// α = span{F₁ + b Z} with Z the holomorphic completion of F_zz inside G'(f) ⊕ G⁽²⁾(f).
JetSubbundle<cplx> torus_alpha(const ACMap<cplx>& m, const Jet<cplx>& b);

}  // namespace g2t

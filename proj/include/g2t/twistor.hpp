#pragma once
#include "g2t/bundles.hpp"

#include <string>
#include <utility>

namespace g2t {

struct WrongS : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotHarmonic : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotNilconformal : PreconditionError {
    using PreconditionError::PreconditionError;
};

// Legs ψ_lo, …, ψ_hi; real flags use lo = −s.
template <class T>
struct Flag {
    int lo = 0;
    std::vector<JetSubbundle<T>> legs;

    int hi() const { return lo + int(legs.size()) - 1; }
    bool has(int i) const { return i >= lo && i <= hi(); }
    const JetSubbundle<T>& leg(int i) const { return legs.at(size_t(i - lo)); }
    int order() const {
        int n = legs.empty() ? 0 : legs[0].order();
        for (auto& l : legs) n = std::min(n, l.order());
        return n;
    }
    std::vector<int> ranks() const {
        std::vector<int> r;
        for (auto& l : legs) r.push_back(l.rank());
        return r;
    }
};

template <class T>
Flag<T> make_flag(int lo, std::vector<JetSubbundle<T>> legs) {
    Flag<T> f;
    f.lo = lo;
    f.legs = std::move(legs);
    return f;
}

template <class T>
Flag<T> flag_from_subspaces(int lo, const std::vector<Subspace<T>>& legs, int order) {
    Flag<T> f;
    f.lo = lo;
    for (auto& l : legs) f.legs.push_back(JetSubbundle<T>::constant(l, order));
    return f;
}

template <class T>
Flag<T> standard_flag(int s, int order = 2) {
    return flag_from_subspaces<T>(-s, standard_flag_legs<T>(s), order);
}

// Grading on weights whose level sets are the standard legs.
inline int flag_grade(int s, const Weight& w) {
    switch (s) {
        case 1: return w.b;
        case 2: return 2 * w.a - 3 * w.b;
        case 3: return 2 * w.a - w.b;
        default: throw PreconditionError("flag_grade: s must be 1, 2 or 3");
    }
}

// Roots of grade one: derivations raising each standard leg to the next.
inline std::vector<Weight> grade_one_roots(int s) {
    std::vector<Weight> out;
    for (auto& r : roots())
        if (flag_grade(s, r) == 1) out.push_back(r);
    return out;
}

// Legs ψ_k = G_k ⊖ G_{k-1} of an increasing chain G_lo ⊂ … ⊂ G_hi = ℂ⁷.
template <class T>
Flag<T> flag_from_filtration(int lo, const std::vector<JetSubbundle<T>>& chain) {
    Flag<T> f;
    f.lo = lo;
    for (size_t k = 0; k < chain.size(); ++k)
        f.legs.push_back(k == 0 ? chain[0] : ominus(chain[k], chain[k - 1]));
    return f;
}

// Flag obtained by moving the standard filtration ψ_{≤k} with a jet g(z) of complex G₂.
template <class T>
Flag<T> moved_standard_flag(const JetMatrix<T>& g, int s) {
    auto legs = standard_flag_legs<T>(s);
    std::vector<JetSubbundle<T>> chain;
    Mat<T> acc(7, 0);
    for (auto& l : legs) {
        acc = acc.hcat(l.matrix());
        chain.push_back(JetSubbundle<T>::from_frame(g * JetMatrix<T>::constant(acc, g.order())));
    }
    return flag_from_filtration(-s, chain);
}

template <class T>
bool is_partition(const Flag<T>& f) {
    int total = 0;
    for (size_t i = 0; i < f.legs.size(); ++i) {
        total += f.legs[i].rank();
        for (size_t j = i + 1; j < f.legs.size(); ++j)
            if (!f.legs[i].is_orthogonal_to(f.legs[j])) return false;
    }
    return total == 7;
}

template <class T>
bool is_real_flag(const Flag<T>& f) {
    if (f.lo != -f.hi()) return false;
    for (int i = 0; i <= f.hi(); ++i)
        if (!same(f.leg(-i), f.leg(i).conj())) return false;
    return true;
}

// ψ_i × ψ_j ⊆ ψ_{i+j}, with ψ_k = 0 outside the index range.
template <class T>
bool is_G2_flag(const Flag<T>& f) {
    for (int i = f.lo; i <= f.hi(); ++i)
        for (int j = i; j <= f.hi(); ++j) {
            const auto& a = f.leg(i);
            const auto& b = f.leg(j);
            for (auto& u : a.sections())
                for (auto& v : b.sections()) {
                    auto w = cross(u, v);
                    double scale = u.max_abs() * v.max_abs();
                    if (f.has(i + j)) {
                        const auto& t = f.leg(i + j);
                        int n = std::min(t.order(), w.order());
                        if (!negligible(t.truncated(n).project_perp(w.truncated(n)), a.tol(), scale)) return false;
                    } else if (!negligible(w, a.tol(), scale)) {
                        return false;
                    }
                }
        }
    return true;
}

template <class T>
bool sff_vanishes(const Flag<T>& f, int i, int j) {
    const auto& a = f.leg(i);
    if (a.rank() == 0 || f.leg(j).rank() == 0) return true;
    return negligible(sff_frame(a, f.leg(j)), a.tol(), a.frame().max_abs());
}

// Pairs (i, j), i ≠ j, with A'_{ψ_i,ψ_j} not identically zero.
template <class T>
std::vector<std::pair<int, int>> nonzero_sff(const Flag<T>& f) {
    std::vector<std::pair<int, int>> out;
    for (int i = f.lo; i <= f.hi(); ++i)
        for (int j = f.lo; j <= f.hi(); ++j)
            if (i != j && !sff_vanishes(f, i, j)) out.emplace_back(i, j);
    return out;
}

template <class T>
bool is_J2_holomorphic(const Flag<T>& f) {
    for (auto [i, j] : nonzero_sff(f)) {
        int d = i - j;
        if ((d > 0 && d % 2 == 1) || (d < 0 && (-d) % 2 == 0)) return false;
    }
    return true;
}

template <class T>
bool is_J1_holomorphic(const Flag<T>& f) {
    for (auto [i, j] : nonzero_sff(f))
        if (i > j) return false;
    return true;
}

template <class T>
bool is_superhorizontal(const Flag<T>& f) {
    for (auto [i, j] : nonzero_sff(f))
        if (j != i + 1) return false;
    return true;
}

template <class T>
JetSubbundle<T> twistor_project(const Flag<T>& f) {
    JetSubbundle<T> acc = JetSubbundle<T>::zero(f.order());
    bool any = false;
    for (int i = f.lo; i <= f.hi(); ++i) {
        if (((i % 2) + 2) % 2 != 0) continue;
        acc = any ? acc + f.leg(i) : f.leg(i);
        any = true;
    }
    return acc;
}

template <class T>
bool same_flag(const Flag<T>& a, const Flag<T>& b) {
    if (a.lo != b.lo || a.legs.size() != b.legs.size()) return false;
    for (size_t k = 0; k < a.legs.size(); ++k) {
        int n = std::min(a.legs[k].order(), b.legs[k].order());
        if (!same(a.legs[k].truncated(n), b.legs[k].truncated(n))) return false;
    }
    return true;
}

template <class T>
bool check_uniqueness(const JetSubbundle<T>& phi, const Flag<T>& a, const Flag<T>& b) {
    auto pa = twistor_project(a), pb = twistor_project(b);
    int n = std::min({phi.order(), pa.order(), pb.order()});
    if (!same(pa.truncated(n), phi.truncated(n)) || !same(pb.truncated(n), phi.truncated(n))) return false;
    return same_flag(a, b);
}

template <class T>
bool is_strongly_conformal(const JetSubbundle<T>& phi) {
    auto s = s_invariant(phi);
    return s && *s == 1;
}

template <class T>
struct Lift {
    int s = 0;
    Flag<T> flag;
    JetSubbundle<T> beta, W, ell, D;
    int rank_beta = 0;
    std::string branch;
};

namespace detail {

template <class T>
void require_s(const JetSubbundle<T>& phi, int s, int min_order) {
    if (phi.order() < min_order) throw JetOrderError("lift: jet order too small for this construction");
    auto got = s_invariant(phi);
    if (!got || *got != s)
        throw WrongS("lift_s" + std::to_string(s) + ": s(φ) = " + (got ? std::to_string(*got) : "none"));
}

template <class T>
JetSubbundle<T> common(const JetSubbundle<T>& a, int n) {
    return a.truncated(std::min(a.order(), n));
}

}  // namespace detail

// W = β^a ∩ φ⊥ with β = A_z(φ); flag (W̄, φ, W).
template <class T>
Lift<T> lift_s1(const JetSubbundle<T>& phi) {
    detail::require_s(phi, 1, 2);
    JetMatrix<T> A = az_matrix(phi);
    const int n = A.order();
    JetSubbundle<T> ph = phi.truncated(n);
    Lift<T> L;
    L.s = 1;
    L.beta = image(A, ph);
    L.rank_beta = L.beta.rank();
    if (L.rank_beta == 0) throw PreconditionError("lift_s1: φ is constant");
    L.W = L.rank_beta == 2 ? L.beta : intersect(annihilator(L.beta), ph.complement());
    L.branch = L.rank_beta == 2 ? "W = beta" : "W = beta^a & phi^perp";
    JetSubbundle<T> mid = (L.W + L.W.conj()).complement();
    L.flag = make_flag<T>(-1, {L.W.conj(), mid, L.W});
    return L;
}

// ℓ = A_z(W), W the negative extension of β = A_z²(φ⊥) in φ⊥; W is then replaced by ℓ^a ∩ φ⊥.
template <class T>
Lift<T> lift_s2(const JetSubbundle<T>& phi) {
    detail::require_s(phi, 2, 2);
    JetMatrix<T> A = az_matrix(phi);
    const int n = A.order();
    JetSubbundle<T> ph = phi.truncated(n), perp = ph.complement();
    Lift<T> L;
    L.s = 2;
    L.beta = image(A * A, perp);
    L.rank_beta = L.beta.rank();
    JetSubbundle<T> W0;
    if (L.rank_beta == 0) {
        L.ell = image(A, perp);
        L.branch = "l = A(phi^perp)";
    } else {
        if (L.rank_beta == 1) {
            JetSubbundle<T> bb = L.beta.conj();
            W0 = L.beta + intersect(intersect(bb.complement(), annihilator(bb)), perp);
            L.branch = "negative extension of beta";
        } else {
            W0 = L.beta;
            L.branch = "W = beta";
        }
        L.ell = image(A, W0);
    }
    if (L.ell.rank() != 1) throw RankDrop("lift_s2: A_z(W) is not a line");
    JetSubbundle<T> la = annihilator(L.ell);
    L.W = intersect(la, perp);
    JetSubbundle<T> p1 = ominus(la, L.ell);
    JetSubbundle<T> p0 = (la + la.conj()).complement();
    L.flag = make_flag<T>(-2, {L.ell.conj(), p1.conj(), p0, p1, L.ell});
    return L;
}

// ℓ = A_z²(W), D = A_z(W) ⊕ A_z²(W), W = β^a ∩ φ⊥ with β = A_z³(φ).
template <class T>
Lift<T> lift_s3(const JetSubbundle<T>& phi) {
    detail::require_s(phi, 3, 2);
    JetMatrix<T> A = az_matrix(phi);
    const int n = A.order();
    JetSubbundle<T> ph = phi.truncated(n), perp = ph.complement();
    Lift<T> L;
    L.s = 3;
    L.beta = image(A * A * A, ph);
    L.rank_beta = L.beta.rank();
    if (L.rank_beta == 0) throw PreconditionError("lift_s3: (A_z)³(φ) vanishes");
    bool kills = image(A, L.beta).rank() == 0;
    if (kills != (L.rank_beta == 1)) throw RankDrop("lift_s3: rank of β inconsistent with A_z(β)");
    L.branch = kills ? "A(beta) = 0, rank 1" : "A(beta) != 0, W = beta";
    L.W = intersect(annihilator(L.beta), perp);
    JetSubbundle<T> AW = image(A, L.W);
    L.ell = image(A * A, L.W);
    if (L.ell.rank() != 1 || AW.rank() != 1) throw RankDrop("lift_s3: A_z(W) or A_z²(W) is not a line");
    L.D = AW + L.ell;
    JetSubbundle<T> la = annihilator(L.ell);
    JetSubbundle<T> p2 = ominus(L.D, L.ell);
    JetSubbundle<T> p1 = ominus(la, L.D);
    JetSubbundle<T> p0 = (la + la.conj()).complement();
    L.flag = make_flag<T>(-3, {L.ell.conj(), p2.conj(), p1.conj(), p0, p1, p2, L.ell});
    return L;
}

struct CheckItem {
    std::string name;
    bool ok;
};

// Structural properties every lift must have.
template <class T>
std::vector<CheckItem> check_lift(const JetSubbundle<T>& phi, const Lift<T>& L) {
    std::vector<CheckItem> out;
    const Flag<T>& f = L.flag;
    auto add = [&](std::string n, bool ok) { out.push_back({std::move(n), ok}); };
    add("legs orthogonal, sum C^7", is_partition(f));
    add("reality", is_real_flag(f));
    add("G2-flag", is_G2_flag(f));
    add("J2-holomorphic", is_J2_holomorphic(f));
    auto pr = twistor_project(f);
    int n = std::min(pr.order(), phi.order());
    add("projects to phi", same(pr.truncated(n), phi.truncated(n)));
    JetMatrix<T> A = az_matrix(phi);
    auto Apow = [&](const JetSubbundle<T>& V, int k) {
        JetSubbundle<T> r = V;
        for (int i = 0; i < k; ++i) r = image(A, r);
        return r;
    };
    for (int i = 0; i < L.s; ++i) add("A^" + std::to_string(i) + "(W) isotropic", Apow(L.W, i).is_isotropic());
    add("beta in W", L.W.contains(L.beta));
    if (L.s == 1) {
        add("W rank 2", L.W.rank() == 2);
        auto w = L.W.sections();
        add("W in ker A", image(A, L.W).rank() == 0);
        add("W coassociative", w.size() == 2 && negligible(cross(w[0], w[1]), L.W.tol(), w[0].max_abs() * w[1].max_abs()));
    } else {
        add("l isotropic line", L.ell.rank() == 1 && L.ell.is_isotropic());
        add("A(l) = 0", image(A, L.ell).rank() == 0);
    }
    if (L.s == 2) {
        auto w = L.W.sections();
        add("W x W = l", w.size() == 2 && L.ell.contains(cross(w[0], w[1])) &&
                             !cross(w[0], w[1]).eval0().is_zero(L.W.tol()));
    }
    if (L.s == 3) {
        add("A^2(W) in W", L.W.contains(Apow(L.W, 2)));
        add("l in D in l^a", L.D.contains(L.ell) && annihilator(L.ell).contains(L.D));
        add("A(D) in l", L.ell.contains(image(A, L.D)));
    }
    return out;
}

inline bool all_ok(const std::vector<CheckItem>& items) {
    for (auto& c : items)
        if (!c.ok) return false;
    return true;
}

template <class T>
Lift<T> lift(const JetSubbundle<T>& phi) {
    if (phi.order() >= 2 && !is_harmonic(phi)) throw NotHarmonic("lift: φ is not harmonic");
    auto s = s_invariant(phi);
    if (!s) throw NotNilconformal("lift: φ is not nilconformal");
    switch (*s) {
        case 1: return lift_s1(phi);
        case 2: return lift_s2(phi);
        case 3: return lift_s3(phi);
        default: throw WrongS("lift: s(φ) = " + std::to_string(*s) + " is impossible for G₂/SO(4)");
    }
}

}  // namespace g2t

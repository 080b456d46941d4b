#include "g2t/s6maps.hpp"

#include "g2t/random.hpp"

namespace g2t {

namespace {

QI draw_unit_gaussian(Rng& rng) {
    std::uniform_int_distribution<int> d(-1, 1);
    QI c;
    while (c.is_zero()) c = QI(mpq_class(d(rng)), mpq_class(d(rng)));
    return c;
}

}  // namespace

Q5Curve superhorizontal_poly(int id) {
    Rng rng(std::uint64_t(id) * 7919u + 13u);
    Mat<QI> E(7, 7);
    for (auto& r : grade_one_roots(3)) E = E + (id == 0 ? QI(1) : draw_unit_gaussian(rng)) * root_vector(r);
    Mat<QI> g = Mat<QI>::identity(7);
    if (id != 0) {
        g = random_g2_rational(rng);
        std::uniform_int_distribution<size_t> pick(0, roots().size() - 1);
        for (int k = 0; k < 2; ++k) g = g * exp_nilpotent(draw_unit_gaussian(rng) * root_vector(roots()[pick(rng)]));
    }
    Vec7<QI> v = exact_weight_vectors().at(Weight{-2, -1});
    Q5Curve h;
    QI fact(1);
    for (int k = 0; k <= 6; ++k) {
        if (k > 0) {
            v = apply(E, v);
            fact = fact * QI(k);
        }
        h.coeffs.push_back((QI(1) / fact) * apply(g, v));
    }
    return h;
}

Q5Curve non_superhorizontal_q5() {
    const auto& w = exact_weight_vectors();
    return Q5Curve{{w.at(Weight{-2, -1}), w.at(Weight{1, 0})}};
}

bool is_q5_isotropic(const Q5Curve& h) {
    int n = 2 * h.degree();
    JetVec7<QI> H = h.jet(QI(0), n);
    return dot(H, H).is_zero(0.0);
}

bool superhorizontal_q5_check(const Q5Curve& h) {
    int n = 2 * h.degree() + 1;
    JetVec7<QI> H = h.jet(QI(0), n);
    if (H.eval0().is_zero(0.0)) throw PreconditionError("Q5Curve: H vanishes at the base point");
    JetVec7<QI> H1 = dz(H);
    return cross(H.truncated(H1.order()), H1).is_zero(0.0);
}

bool is_full(const Q5Curve& h, const QI& z0) {
    JetVec7<QI> H = h.jet(z0, 6);
    Mat<QI> M(7, 7);
    JetVec7<QI> d = H;
    for (int k = 0; k <= 6; ++k) {
        Vec7<QI> v = d.eval0();
        for (int i = 0; i < 7; ++i) M(i, k) = v[i];
        if (k < 6) d = dz(d);
    }
    return rank(M) == 7;
}

std::array<Vec7<cplx>, 3> torus_vectors() {
    auto wb = build_weight_basis<cplx>();
    const cplx s = 1.0 / std::sqrt(2.0);
    Vec7<cplx> v1 = s * wb[Weight{1, 0}], v2 = s * wb[Weight{1, 1}];
    return {v1, v2, cross(v1, v2).conj()};
}

std::array<cplx, 3> torus_exponents() {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx m = cplx(0, 2);
    return {m, m * w, m * w * w};
}

Vec7<cplx> vacuum_torus_value(cplx z) {
    auto v = torus_vectors();
    auto mu = torus_exponents();
    Vec7<cplx> F;
    for (int j = 0; j < 3; ++j) {
        cplx e = std::exp(mu[size_t(j)] * z - std::conj(mu[size_t(j)]) * std::conj(z));
        F = F + e * v[size_t(j)] + (1.0 / e) * v[size_t(j)].conj();
    }
    return cplx(1.0 / std::sqrt(3.0)) * F;
}

ACMap<cplx> vacuum_torus(cplx z0, int order, double tol) {
    auto v = torus_vectors();
    auto mu = torus_exponents();
    JetVec7<cplx> F(order);
    for (int j = 0; j < 3; ++j) {
        cplx m = mu[size_t(j)];
        cplx e0 = std::exp(m * z0 - std::conj(m) * std::conj(z0));
        Jet<cplx> ep = e0 * jet_exp_linear(m, -std::conj(m), order);
        Jet<cplx> em = (1.0 / e0) * jet_exp_linear(-m, std::conj(m), order);
        F = F + ep * JetVec7<cplx>::constant(v[size_t(j)], order) + em * JetVec7<cplx>::constant(v[size_t(j)].conj(), order);
    }
    ACMap<cplx> out;
    out.tol = tol;
    out.F = cplx(1.0 / std::sqrt(3.0)) * F;
    return out;
}

JetSubbundle<cplx> torus_alpha(const ACMap<cplx>& m, const Jet<cplx>& b) {
    JetVec7<cplx> F1 = dz(m.F);
    JetVec7<cplx> F2 = dz(F1);
    const int n = F2.order();
    auto Fs = gauss_sections(m.F, 2);
    JetSubbundle<cplx> V = JetSubbundle<cplx>::from_sections({Fs[1].truncated(n), Fs[2]}, n, m.tol);
    JetVec7<cplx> Z = holomorphic_completion(V, F2, F1.truncated(n));
    const int k = std::min(Z.order(), b.order());
    JetVec7<cplx> L = F1.truncated(k) + b.truncated(k) * Z.truncated(k);
    return JetSubbundle<cplx>::from_sections({L}, k, m.tol);
}

}  // namespace g2t

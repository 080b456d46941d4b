#include <doctest.h>

#include "fixtures.hpp"

using namespace g2t;
using B = JetSubbundle<QI>;
using Bf = JetSubbundle<cplx>;

TEST_CASE("projection basics") {
    Rng rng(31);
    auto S = fx::to_jets<QI>(fx::random_poly_frame(rng, 3, 2), 4);
    B V = B::from_frame(S);
    for (int j = 0; j < 3; ++j) CHECK((V.project(V.section(j)) - V.section(j)).is_zero(0));
    JetVec7<QI> v;
    auto R = fx::to_jets<QI>(fx::random_poly_frame(rng, 1, 2), 4);
    v = R.col(0);
    CHECK((V.project(v) + V.project_perp(v) - v).is_zero(0));
    CHECK(V.complement().rank() == 4);
    CHECK(V.complement().project(V.section(0)).is_zero(0));
    JetMatrix<QI> P = V.projector();
    CHECK((P * P - P).is_zero(0));
    CHECK((P.adjoint() - P).is_zero(0));
}

TEST_CASE("degenerate frames and rank drops are reported") {
    JetMatrix<QI> S(7, 2, 3);
    S(0, 0) = Jet<QI>::constant(QI(1), 3);
    S(0, 1) = Jet<QI>::constant(QI(2), 3);
    CHECK_THROWS_AS(B::from_frame(S), GramSingular);
    // columns e₁ and z e₂: rank 1 at 0 but 2 nearby
    JetMatrix<QI> M(7, 2, 3);
    M(0, 0) = Jet<QI>::constant(QI(1), 3);
    M(1, 1) = Jet<QI>::z(3);
    CHECK_THROWS_AS(B::span(M), RankDrop);
}

TEST_CASE("A_z agrees with the fraction-free oracle at the base point") {
    Rng rng(41);
    int checked = 0;
    for (int n = 0; n < 60; ++n) {
        int k = 1 + n % 3;
        auto frame = fx::random_poly_frame(rng, k, 2);
        B phi = B::from_frame(fx::to_jets<QI>(frame, 3));
        auto A = az_matrix(phi).eval0();
        auto Ao = oracle::az_at_base(frame);
        bool eq = true;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) eq = eq && A(i, j) == Ao[i][j];
        CHECK(eq);
        ++checked;
    }
    CHECK(checked >= 50);
}

TEST_CASE("A_z is minus the sum of the second fundamental forms") {
    Rng rng(43);
    auto frame = fx::random_poly_frame(rng, 2, 2);
    B phi = B::from_frame(fx::to_jets<QI>(frame, 4));
    B perp = phi.complement();
    auto A = az_matrix(phi);
    for (int j = 0; j < 7; ++j) {
        auto v = JetVec7<QI>::constant(Vec7<QI>::basis(j), 4);
        auto pv = phi.project(v), qv = perp.project(v);
        auto expected = -(sff(phi, perp, pv, Dir::Z) + sff(perp, phi, qv, Dir::Z));
        CHECK((A.apply(v).truncated(3) - expected).is_zero(0));
    }
}

TEST_CASE("second fundamental form properties") {
    Rng rng(47);
    auto frame = fx::random_poly_frame(rng, 2, 2);
    B phi = B::from_frame(fx::to_jets<QI>(frame, 4));
    B psi = phi.complement();
    // constant φ, constant v
    B c = B::constant(Subspace<QI>::span({Vec7<QI>::basis(0)}), 3);
    CHECK(sff(c, c.complement(), c.section(0), Dir::Z).is_zero(0));
    // tensoriality: sff(f v) = f sff(v)
    auto f = fx::to_jets<QI>(fx::random_poly_frame(rng, 1, 2), 4)(0, 0);
    auto v = phi.section(0);
    auto lhs = sff(phi, psi, f * v, Dir::Z);
    auto rhs = f.truncated(3) * sff(phi, psi, v, Dir::Z);
    CHECK((lhs - rhs).is_zero(0));
    // A''_{ψ,φ} = −(A'_{φ,ψ})*
    for (int a = 0; a < phi.rank(); ++a)
        for (int b = 0; b < psi.rank(); ++b) {
            auto va = phi.section(a), wb = psi.section(b);
            auto x = herm(sff(phi, psi, va, Dir::Z), wb.truncated(3)) +
                     herm(va.truncated(3), sff(psi, phi, wb, Dir::Zbar));
            CHECK(x.is_zero(0));
        }
    CHECK_THROWS_AS(sff(phi, phi, v, Dir::Z), PreconditionError);
}

TEST_CASE("isotropic line has vanishing A' into its conjugate") {
    const int N = 5;
    Jet<QI> w = Jet<QI>::z(N) + QI(1, 2) * Jet<QI>::zbar(N) * Jet<QI>::zbar(N) + Jet<QI>::constant(QI(3), N);
    auto v = fx::null_curve(w);
    B phi = B::from_sections({v}, N);
    REQUIRE(phi.is_isotropic());
    B bar = phi.conj();
    CHECK(sff(phi, bar, v, Dir::Z).is_zero(0));
    CHECK(sff(phi, bar, v, Dir::Zbar).is_zero(0));
}

TEST_CASE("A_z is skew for real maps") {
    Rng rng(53);
    oracle::PolyMatrix frame(7, std::vector<oracle::Poly>(3));
    // real sections: p + p̄ with p random polynomial
    auto raw = fx::random_poly_frame(rng, 3, 2);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 3; ++j) frame[i][j] = raw[i][j] + oracle::conj(raw[i][j]);
    B phi = B::from_frame(fx::to_jets<QI>(frame, 4));
    REQUIRE(phi.is_real());
    auto A = az_matrix(phi);
    CHECK((A + A.transpose()).is_zero(0));
}

namespace {

// H(z) = (1, z, z², …, z⁶), a full holomorphic curve.
JetVec7<QI> moment_curve(int N) {
    JetVec7<QI> v(N);
    Jet<QI> zk = Jet<QI>::constant(QI(1), N);
    for (int k = 0; k < 7; ++k) {
        v[k] = zk;
        zk = zk * Jet<QI>::z(N);
    }
    return v;
}

}  // namespace

TEST_CASE("harmonicity") {
    const int N = 6;
    B c = B::constant(Subspace<QI>::span({Vec7<QI>::basis(0), Vec7<QI>::basis(3)}), N);
    CHECK(is_harmonic(c));
    CHECK(nilorder(c) == 1);
    CHECK(s_invariant(c) == 1);

    B hol = B::from_sections({moment_curve(N)}, N);
    CHECK(is_harmonic(hol));
    CHECK(nilorder(hol) == 2);
    CHECK(s_invariant(hol) == 1);

    JetVec7<QI> v(N);
    v[0] = Jet<QI>::constant(QI(1), N);
    v[1] = Jet<QI>::z(N) * Jet<QI>::zbar(N);
    v[2] = Jet<QI>::zbar(N);
    B bad = B::from_sections({v}, N);
    CHECK_FALSE(is_harmonic(bad));
    CHECK_THROWS_AS(is_harmonic(B::constant(Subspace<QI>::whole(), 1)), JetOrderError);
}

TEST_CASE("osculating bundles of a holomorphic curve") {
    const int N = 8;
    auto H = moment_curve(N);
    auto seq = harmonic_sequence(B::from_sections({H}, N), 6);
    REQUIRE(seq.size() == 7);
    for (auto& g : seq) CHECK(g.rank() == 1);
    for (size_t i = 0; i < seq.size(); ++i)
        for (size_t j = i + 1; j < seq.size(); ++j) CHECK(seq[i].is_orthogonal_to(seq[j]));
    // G^{(1)} is spanned by the projection of H' orthogonal to H
    B phi = seq[0];
    auto h1 = phi.project_perp(dz(H));
    CHECK(seq[1].contains(h1));
    CHECK(gauss_transform(B::constant(Subspace<QI>::whole(), 2), Dir::Z).rank() == 0);

    // osculating space h_(2) = span(H, H', H'') is harmonic; check nilorder relation
    B osc = B::from_sections({H, dz(H), dz(dz(H))}, N - 2);
    REQUIRE(is_harmonic(osc));
    auto r = nilorder(osc);
    auto s = s_invariant(osc);
    REQUIRE(r);
    REQUIRE(s);
    CHECK(*r - 1 <= 2 * *s);
    CHECK(2 * *s <= *r + 1);
}

TEST_CASE("A_z filtrations satisfy the filtration definition") {
    const int N = 8;
    auto H = moment_curve(N);
    for (int k : {1, 2, 3}) {
        std::vector<JetVec7<QI>> secs{H};
        for (int i = 1; i < k; ++i) secs.push_back(dz(secs.back()));
        B phi = B::from_sections(secs, N - k + 1);
        auto Fi = filtration_by_images(phi);
        auto Fk = filtration_by_kernels(phi);
        CHECK(is_A_filtration(Fi, phi));
        CHECK(is_A_filtration(Fk, phi));
        for (size_t i = 0; i + 1 < Fi.chain.size(); ++i) CHECK(Fi.chain[i].rank() > Fi.chain[i + 1].rank());
        for (size_t i = 0; i + 1 < Fk.chain.size(); ++i) CHECK(Fk.chain[i].rank() > Fk.chain[i + 1].rank());
        int total = 0;
        for (auto& l : Fi.legs()) total += l.rank();
        CHECK(total == 7);
    }
    B c = B::constant(Subspace<QI>::span({Vec7<QI>::basis(0)}), 4);
    CHECK(filtration_by_images(c).chain.size() == 1);
}

TEST_CASE("float backend agrees with exact backend") {
    Rng rng(59);
    auto frame = fx::random_poly_frame(rng, 3, 2);
    B ex = B::from_frame(fx::to_jets<QI>(frame, 4));
    Bf fl = Bf::from_frame(fx::to_jets<cplx>(frame, 4));
    auto Ae = az_matrix(ex);
    auto Af = az_matrix(fl);
    double err = 0;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            for (int d = 0; d <= 3; ++d)
                for (int q = 0; q <= d; ++q)
                    err = std::max(err, std::abs(Ae(i, j).at(d - q, q).to_cplx() - Af(i, j).at(d - q, q)));
    CHECK(err < 1e-9);
}

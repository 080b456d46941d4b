#include <doctest.h>

#include "fixtures.hpp"
#include "g2t/s6maps.hpp"

using namespace g2t;

namespace {

std::vector<QI> as_list(const Vec7<QI>& v) { return {v.c.begin(), v.c.end()}; }

// Coefficients of H·H and H × H′ through the Cayley–Dickson oracle.
bool oracle_superhorizontal(const Q5Curve& h, bool& isotropic) {
    const int d = h.degree();
    isotropic = true;
    bool sh = true;
    for (int deg = 0; deg <= 2 * d; ++deg) {
        QI s;
        std::vector<QI> x(7);
        for (int j = 0; j <= d; ++j) {
            int k = deg - j;
            if (k >= 0 && k <= d) s = s + oracle::dot(as_list(h.coeffs[size_t(j)]), as_list(h.coeffs[size_t(k)]));
            if (k >= 0 && k + 1 <= d) {
                auto c = oracle::cross(as_list(h.coeffs[size_t(j)]), as_list(h.coeffs[size_t(k + 1)]));
                for (int i = 0; i < 7; ++i) x[size_t(i)] = x[size_t(i)] + QI(k + 1) * c[size_t(i)];
            }
        }
        isotropic = isotropic && s.is_zero();
        for (auto& c : x) sh = sh && c.is_zero();
    }
    return sh;
}

int isotropy_order(const ACMap<cplx>& m, int rmax) {
    auto Fs = gauss_sections(m.F, rmax);
    for (int i = 1; i <= rmax; ++i) {
        auto f = m.F.truncated(Fs[size_t(i)].order());
        if (!negligible(herm(Fs[size_t(i)], f), m.tol, std::max(1.0, Fs[size_t(i)].max_abs()))) return i - 1;
    }
    return rmax;
}

}  // namespace

TEST_CASE("generated quadric curves are superhorizontal by the octonion oracle") {
    for (int id = 0; id < 4; ++id) {
        CAPTURE(id);
        Q5Curve h = superhorizontal_poly(id);
        CHECK(h.degree() == 6);
        bool iso = false;
        CHECK(oracle_superhorizontal(h, iso));
        CHECK(iso);
        CHECK(is_q5_isotropic(h));
        CHECK(superhorizontal_q5_check(h));
        CHECK(is_full(h, QI(0)));
        CHECK(is_full(h, QI(1, 2)));
    }
    Q5Curve bad = non_superhorizontal_q5();
    bool iso = false;
    CHECK_FALSE(oracle_superhorizontal(bad, iso));
    CHECK(iso);
    CHECK(is_q5_isotropic(bad));
    CHECK_FALSE(superhorizontal_q5_check(bad));
    CHECK_THROWS_AS(superhorizontal_q5_check(Q5Curve{{Vec7<QI>{}, Vec7<QI>::basis(0)}}), PreconditionError);
}

TEST_CASE("harmonic sequence of a superhorizontal curve") {
    Q5Curve h = superhorizontal_poly(1);
    auto f = q5_harmonic_flag(h, QI(0), 2);
    CHECK(is_partition(f));
    CHECK(is_real_flag(f));
    CHECK(is_G2_flag(f));
    CHECK(is_superhorizontal(f));
    // coarsened to the legs of T₂: also superhorizontal, with ℓ = h̄
    auto g = make_flag<QI>(-2, {f.leg(-3), f.leg(-2) + f.leg(-1), f.leg(0), f.leg(1) + f.leg(2), f.leg(3)});
    CHECK(is_G2_flag(g));
    CHECK(is_superhorizontal(g));
    CHECK(same(g.leg(2), f.leg(-3).conj()));
}

TEST_CASE("Bryant correspondence") {
    Q5Curve h = superhorizontal_poly(2);
    auto m = bryant_map(h, QI(0), 4);
    CHECK(m.is_real());
    CHECK(m.is_unit());
    CHECK(m.is_almost_complex());
    auto hs = q5_harmonic_flag(h, QI(0), 4);
    CHECK(same(m.line(), hs.leg(0)));
    auto af = ac_flag(m);
    CHECK(is_G2_flag(af));
    CHECK(is_superhorizontal(af));
    for (int i = -3; i <= 3; ++i) {
        CAPTURE(i);
        CHECK(same(af.leg(i), hs.leg(i).truncated(af.order())));
    }
    CHECK(classify(m) == ACType::I);
    CHECK_THROWS_AS(bryant_map(Q5Curve{{Vec7<QI>{}, Vec7<QI>::basis(0)}}, QI(0), 2), PreconditionError);
}

TEST_CASE("the three harmonic maps from a superhorizontal curve") {
    Q5Curve h = superhorizontal_poly(0);
    const int N = 3;
    for (int i = 1; i <= 3; ++i) {
        CAPTURE(i);
        auto phi = three_map_family(h, i, QI(0), N);
        CHECK(phi.rank() == 3);
        CHECK(phi.is_real());
        CHECK(is_harmonic(phi));
        CHECK(s_invariant(phi) == (i == 2 ? 3 : 1));
        auto L = lift(phi);
        CHECK(all_ok(check_lift(phi, L)));
    }
    auto hs = q5_harmonic_flag(h, QI(0), N);
    auto phi2 = three_map_family(h, 2, QI(0), N);
    JetMatrix<QI> A = az_matrix(phi2);
    auto A4 = image(A * A * A * A, hs.leg(-3).truncated(A.order()));
    CHECK(same(A4, hs.leg(1).truncated(A4.order())));
    auto L2 = lift_s3(phi2);
    CHECK(same_flag(L2.flag, [&] {
        Flag<QI> t = hs;
        for (auto& l : t.legs) l = l.truncated(L2.flag.order());
        return t;
    }()));
    // i = 3: the superhorizontal lift into T₂ and the J₂-holomorphic lift into T₁
    auto phi3 = three_map_family(h, 3, QI(0), N);
    auto t2 = make_flag<QI>(-2, {hs.leg(-3), hs.leg(-2) + hs.leg(-1), hs.leg(0), hs.leg(1) + hs.leg(2), hs.leg(3)});
    CHECK(same(twistor_project(t2), phi3));
    CHECK(is_superhorizontal(t2));
    auto L1 = lift_s1(phi3);
    CHECK(L1.flag.legs.size() == 3);
    CHECK(same(L1.W, (hs.leg(1) + hs.leg(-2)).truncated(L1.W.order())));
}

template <class T>
void check_s2_example(int id, const T& z0) {
    Q5Curve h = superhorizontal_poly(id);
    const int N = 3;
    for (int b = 0; b <= 1; ++b) {
        CAPTURE(b);
        Jet<T> a = Jet<T>::constant(T(1), N + 2) + T(2) * Jet<T>::z(N + 2);
        Jet<T> bj = T(b) * (Jet<T>::constant(T(1), N + 2) - Jet<T>::z(N + 2));
        auto alpha = example_s2_alpha(h, z0, N + 1, a, bj);
        auto phi = example_s2_map(h, z0, alpha);
        CHECK(phi.is_real());
        CHECK(is_harmonic(phi));
        REQUIRE(s_invariant(phi) == 2);
        JetMatrix<T> A = az_matrix(phi);
        CHECK_FALSE(negligible(A * A * phi.projector().truncated(A.order()), phi.tol()));
        auto L = lift_s2(phi);
        for (auto& c : check_lift(phi, L)) {
            CAPTURE(c.name);
            CHECK(c.ok);
        }
        CHECK(same(L.flag.leg(2), alpha.conj().truncated(L.flag.order())));
        CHECK_FALSE(is_superhorizontal(L.flag));
        CHECK_FALSE(sff_vanishes(L.flag, -2, 1));
    }
    auto hs = q5_harmonic_flag(h, z0, 2);
    CHECK_THROWS_AS(example_s2_map(h, z0, hs.leg(-3)), PreconditionError);
    CHECK_THROWS_AS(example_s2_map(h, z0, hs.leg(1)), PreconditionError);
}

TEST_CASE("uniton pair with s = 2 and its lift into the quadric") {
    check_s2_example<QI>(0, QI(0));
    check_s2_example<cplx>(0, cplx(0.5, 0));
}

TEST_CASE("one-to-one correspondence with almost complex maps") {
    Q5Curve h = superhorizontal_poly(3);
    auto m = bryant_map(h, QI(0), 4);
    auto phi = phi_from_acmap(m);
    CHECK(is_harmonic(phi));
    CHECK(s_invariant(phi) == 1);
    CHECK(s_invariant(phi.complement()) == 1);
    JetMatrix<QI> A = az_matrix(phi);
    CHECK(image(A, phi.truncated(A.order())).rank() == 1);
    auto back = acmap_from_phi(phi);
    int n = back.order();
    CHECK((back.F - m.F.truncated(n)).is_zero(0));
    auto neg = acmap_from_phi(phi, LineChoice::GpPerp);
    CHECK((neg.F + m.F.truncated(n)).is_zero(0));
    CHECK(back.is_almost_complex());
    // rescaling the section by a jet leaves F unchanged
    auto alpha = image(azbar_matrix(phi), phi.truncated(A.order()).complement());
    JetVec7<QI> L = (Jet<QI>::constant(QI(2, 1), n) + Jet<QI>::z(n) * Jet<QI>::zbar(n)) * alpha.section(0);
    JetVec7<QI> F2 = QI::unit_i() * (herm(L, L).inverse() * cross(conj(L), L));
    CHECK((F2 - back.F).is_zero(0));
    CHECK((cross(back.F, alpha.section(0)) - QI::unit_i() * alpha.section(0)).is_zero(0));
    CHECK_THROWS_AS(acmap_from_phi(three_map_family(h, 2, QI(0), 3)), PreconditionError);
}

TEST_CASE("rank-two construction") {
    auto m = bryant_map(superhorizontal_poly(1), QI(0), 5);
    auto phi = rank2_construction(m);
    CHECK(phi.is_real());
    CHECK(is_harmonic(phi));
    CHECK(is_strongly_conformal(phi));
    JetMatrix<QI> A = az_matrix(phi);
    auto G = image(A, phi.truncated(A.order()));
    CHECK(G.rank() == 2);
    auto w = G.sections();
    CHECK(negligible(cross(w[0], w[1]), 0));
    auto f = ac_flag(m);
    CHECK(same(G, (f.leg(1) + f.leg(-2)).truncated(G.order())));
    auto L = lift_s1(phi);
    CHECK(all_ok(check_lift(phi, L)));
    CHECK(same(L.W, G.truncated(L.W.order())));
    CHECK_THROWS_AS(rank2_construction(geodesic_s2_map(QI(0), 4)), TotallyGeodesicS2);
}

TEST_CASE("constant F with a holomorphic curve in CP2") {
    std::array<std::vector<QI>, 3> polys{std::vector<QI>{QI(1)}, std::vector<QI>{QI(0), QI(1)},
                                         std::vector<QI>{QI(1, 1), QI(0), QI(2)}};
    auto [m, alpha] = fconst_example<QI>(polys, QI(1, 3), 4);
    auto phi = add_uniton_pair(m, alpha);
    CHECK(is_harmonic(phi));
    CHECK(is_strongly_conformal(phi));
    CHECK(is_strongly_conformal(phi.complement()));
    JetMatrix<QI> A = az_matrix(phi);
    CHECK(image(A, phi.truncated(A.order())).rank() == 1);
    auto gp = image(A, phi.truncated(A.order()).complement());
    auto gpp = image(azbar_matrix(phi), phi.truncated(A.order()).complement());
    auto prod = cross(gp.section(0), gpp.section(0));
    auto f = m.line().truncated(prod.order());
    CHECK(f.contains(prod));
    CHECK_FALSE(prod.eval0().is_zero(0));
    CHECK_THROWS_AS(acmap_from_phi(phi), PreconditionError);
}

TEST_CASE("totally geodesic almost complex spheres") {
    auto m = geodesic_s2_map(QI(1, 2), 4);
    CHECK(m.is_unit());
    CHECK(m.is_real());
    CHECK(m.is_almost_complex());
    CHECK_THROWS_AS(ac_flag(m), TotallyGeodesicS2);
    CHECK(classify(m) == ACType::IV);
    auto mf = geodesic_s2_map(cplx(0.3, -0.2), 4);
    CHECK(mf.is_almost_complex());
}

TEST_CASE("vacuum torus") {
    auto v = torus_vectors();
    for (int p = 0; p < 3; ++p) {
        CHECK(std::abs(herm(v[size_t(p)], v[size_t(p)]) - 0.5) < 1e-12);
        for (int q = 0; q < 3; ++q) {
            Vec7<cplx> c = cross(v[size_t(p)], v[size_t(q)].conj());
            if (p == q) CHECK((c - cplx(0, 0.5) * Vec7<cplx>::basis(0)).is_zero(1e-12));
            else CHECK(c.is_zero(1e-12));
        }
        Vec7<cplx> pq = cross(v[size_t(p)], v[size_t((p + 1) % 3)]);
        CHECK((pq - v[size_t((p + 2) % 3)].conj()).is_zero(1e-12));
    }
    Rng rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const double pi = std::numbers::pi;
    for (int k = 0; k < 20; ++k) {
        cplx z(u(rng), u(rng));
        auto F = vacuum_torus_value(z);
        CHECK((vacuum_torus_value(z + pi) - F).max_abs() < 1e-10);
        CHECK((vacuum_torus_value(z + cplx(0, pi / std::sqrt(3.0))) - F).max_abs() < 1e-10);
        CHECK(std::abs(F[0]) < 1e-12);
        auto m = vacuum_torus(z, 3);
        CHECK(m.is_real());
        CHECK(m.is_unit());
        CHECK(m.is_almost_complex());
        CHECK((m.F.eval0() - F).max_abs() < 1e-12);
    }
    auto m = vacuum_torus(cplx(0.1, 0.2), 8);
    CHECK(classify(m) == ACType::III);
    CHECK(isotropy_order(m, 6) == 5);
    // ∂⁶F = −64 F: the harmonic sequence is cyclic of order 6
    JetVec7<cplx> d = m.F;
    for (int k = 0; k < 6; ++k) d = dz(d);
    CHECK((d + cplx(64) * m.F.truncated(d.order())).max_abs() < 1e-9);
    auto f = ac_flag(m);
    CHECK(is_G2_flag(f));
    CHECK(is_partition(f));
}

TEST_CASE("uniton pairs over the torus") {
    auto m = vacuum_torus(cplx(0.4, -0.3), 5);
    auto phi1 = add_uniton_pair(m, JetSubbundle<cplx>::from_sections({gauss_sections(m.F, 1)[1]}, 4));
    CHECK(is_harmonic(phi1));
    CHECK(s_invariant(phi1) == 1);
    CHECK(all_ok(check_lift(phi1, lift(phi1))));
    auto back = acmap_from_phi(phi1);
    CHECK((back.F - m.F.truncated(back.order())).max_abs() < 1e-8);
    Jet<cplx> b = Jet<cplx>::constant(cplx(0.5, 0.25), 5) + cplx(1, -1) * Jet<cplx>::z(5);
    auto alpha = torus_alpha(m, b);
    auto phi = add_uniton_pair(m, alpha);
    CHECK(phi.is_real());
    CHECK(is_harmonic(phi));
    CHECK(s_invariant(phi).has_value());
    auto flag = ac_flag(m);
    CHECK(sff_vanishes(flag, 2, -3) == false);
    CHECK(classify(m) == ACType::III);
}

TEST_CASE("algebra of T10 on random points of the sphere") {
    Rng rng(71);
    for (int k = 0; k < 100; ++k) {
        // rational point of S⁶ by inverse stereographic projection
        Vec7<QI> x = random_vec<QI>(rng, true);
        x[6] = QI(0);
        QI n2 = herm(x, x);
        Vec7<QI> F = (QI(1) / (n2 + QI(1))) * (QI(2) * x);
        F[6] = (n2 - QI(1)) / (n2 + QI(1));
        REQUIRE(dot(F, F) == QI(1));
        auto to10 = [&](const Vec7<QI>& v) {
            Vec7<QI> w = v - dot(v, F) * F;
            return QI(1, 2) * (w - QI::unit_i() * cross(F, w));
        };
        Vec7<QI> a = to10(random_vec<QI>(rng)), b = to10(random_vec<QI>(rng));
        CHECK(cross(F, a) == QI::unit_i() * a);
        CHECK(cross(a, b.conj()) == QI::unit_i() * dot(a, b.conj()) * F);
        Vec7<QI> ab = cross(a, b);
        CHECK(cross(F, ab) == -(QI::unit_i() * ab));
        CHECK(herm(ab, ab) == QI(2) * (herm(a, a) * herm(b, b) - dot(a, b.conj()) * sconj(dot(a, b.conj()))));
    }
}

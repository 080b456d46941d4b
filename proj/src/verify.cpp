#include "g2t/verify.hpp"

#include "g2t/generators.hpp"
#include "g2t/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace g2t {

namespace {

struct Outcome {
    bool ok = false;
    std::optional<double> residual;
    std::string detail;

    Outcome(bool b) : ok(b) {}
    Outcome(bool b, double r) : ok(b), residual(r) {}
    Outcome(bool b, std::string d) : ok(b), detail(std::move(d)) {}
};

struct Recorder {
    Report& report;
    std::string prefix;

    void add(const std::string& id, const std::string& anchor, const std::function<Outcome()>& f) {
        Check c;
        c.id = prefix + id;
        c.anchor = anchor;
        try {
            Outcome o = f();
            c.status = o.ok ? "pass" : "fail";
            c.residual = o.residual;
            c.detail = o.detail;
        } catch (const std::exception& e) {
            c.status = "error";
            c.detail = e.what();
        }
        report.checks.push_back(std::move(c));
    }
};

template <class T>
T from_double(double x) {
    if constexpr (is_exact_v<T>) return QI(mpq_class(x));
    else return cplx(x);
}

template <class T>
double tol_for(const Config& c) {
    return is_exact_v<T> ? 0.0 : c.tol;
}

// --- algebra -----------------------------------------------------------------

template <class T>
void algebra_suite(Recorder& rec, const Config& c) {
    Rng rng(c.seed);
    std::vector<std::array<Vec7<T>, 3>> triples;
    for (int n = 0; n < 1000; ++n) triples.push_back({random_vec<T>(rng), random_vec<T>(rng), random_vec<T>(rng)});
    const double tol = tol_for<T>(c);
    auto worst = [&](auto f) {
        double m = 0;
        for (auto& t : triples) m = std::max(m, f(t[0], t[1], t[2]));
        return Outcome(m <= tol, m);
    };
    rec.add("cross.antisymmetric", "u × v = −v × u", [&] {
        return worst([](auto& u, auto& v, auto&) { return (cross(u, v) + cross(v, u)).max_abs(); });
    });
    rec.add("cross.triple_symmetry", "(u, v × w) = (u × v, w)", [&] {
        return worst([](auto& u, auto& v, auto& w) { return scalar_traits<T>::mag(dot(u, cross(v, w)) - dot(cross(u, v), w)); });
    });
    rec.add("cross.double_product", "u × (v × w) + (u × v) × w = 2(u, w)v − (u, v)w − (v, w)u", [&] {
        return worst([](auto& u, auto& v, auto& w) {
            Vec7<T> lhs = cross(u, cross(v, w)) + cross(cross(u, v), w);
            Vec7<T> rhs = T(2) * dot(u, w) * v - dot(u, v) * w - dot(v, w) * u;
            return (lhs - rhs).max_abs();
        });
    });
    rec.add("cross.norm", "(u × v, u × v) = (u, u)(v, v) − (u, v)²", [&] {
        return worst([](auto& u, auto& v, auto&) {
            T d = dot(u, v);
            return scalar_traits<T>::mag(dot(cross(u, v), cross(u, v)) - dot(u, u) * dot(v, v) + d * d);
        });
    });
    rec.add("associator.alternating", "[u, v, w] alternating", [&] {
        return worst([](auto& u, auto& v, auto& w) {
            return (associator(u, v, w) + associator(v, u, w)).max_abs() + (associator(u, v, w) + associator(u, w, v)).max_abs();
        });
    });

    // Maximally isotropic W = span{e'₁ − i e'₂, e'₃ − i e'₄} from frames of ξ₀⊥, half of them reflected.
    rec.add("coassociative.positivity", "positive orientation ⟺ complex coassociative", [&] {
        Rng r2(c.seed + 1);
        int agree = 0, positive = 0;
        const int total = 120;
        for (int n = 0; n < total; ++n) {
            Mat<QI> Q = cayley_orthogonal(r2, 4);
            std::array<Vec7<QI>, 4> f;
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 4; ++i) f[size_t(j)][3 + i] = Q(i, j);
            if (n % 2) f[0] = -f[0];
            QI sigma = dot(f[0], associator(f[1], f[2], f[3]));
            bool pos = sigma == QI(2);
            const QI I = QI::unit_i();
            Vec7<T> v = convert_vec<T>(f[0] - I * f[1]), w = convert_vec<T>(f[2] - I * f[3]);
            auto W = Subspace<T>::span({v, w}, c.tol);
            positive += pos;
            agree += (pos == is_complex_coassociative(W, c.tol));
        }
        return Outcome(agree == total && positive > 0 && positive < total,
                       std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(positive) + " positive");
    });
    rec.add("coassociative.orientation_scalar", "(e₁, [e₂, e₃, e₄]) = ±2 on oriented frames", [&] {
        Rng r2(c.seed + 2);
        for (int n = 0; n < 100; ++n) {
            Mat<QI> Q = cayley_orthogonal(r2, 4);
            std::array<Vec7<QI>, 4> f;
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 4; ++i) f[size_t(j)][3 + i] = Q(i, j);
            QI sigma = dot(f[0], associator(f[1], f[2], f[3]));
            if (!(sigma == QI(2) || sigma == QI(-2))) return Outcome(false, "σ = " + sigma.str());
            const QI I = QI::unit_i();
            Vec7<QI> x = cross(f[0] - I * f[1], f[2] - I * f[3]);
            if (!(dot(x, x.conj()) == QI(4) - QI(2) * sigma)) return Outcome(false, "|v × w|² mismatch");
        }
        return Outcome(true);
    });
}

// --- weights -----------------------------------------------------------------

template <class T>
void weights_suite(Recorder& rec, const Config& c) {
    auto wb = build_weight_basis<T>();
    const double tol = tol_for<T>(c);
    rec.add("basis.conjugation", "conj ℓ_λ = ℓ_{−λ}", [&] {
        double m = 0;
        for (auto& w : short_weights()) m = std::max(m, (wb[w].conj() - wb[-w]).max_abs());
        return Outcome(m <= tol, m);
    });
    rec.add("basis.isotropy", "(ℓ_λ, ℓ_λ) = 0 for λ ≠ 0", [&] {
        double m = 0;
        for (auto& w : short_weights())
            if (!(w == Weight{0, 0})) m = std::max(m, scalar_traits<T>::mag(dot(wb[w], wb[w])));
        return Outcome(m <= tol, m);
    });
    rec.add("product_table", "ℓ_λ × ℓ_η ⊆ ℓ_{λ+η}", [&] {
        int good = 0;
        for (auto& l : short_weights())
            for (auto& m : short_weights()) {
                Vec7<T> p = cross(wb[l], wb[m]);
                Weight t = l + m;
                bool ok = is_weight(t) ? wb.line(t).contains(p, c.tol) : p.is_zero(c.tol);
                good += ok;
            }
        return Outcome(good == 49, std::to_string(good) + "/49 pairs");
    });
    rec.add("annihilator.top", "annihilator of ℓ_{2α₁+α₂} is ℓ_{α₁} ⊕ ℓ_{α₁+α₂} ⊕ ℓ_{2α₁+α₂}", [&] {
        return Outcome(same(annihilator(wb.line({2, 1}), c.tol), wb.lines({{1, 0}, {1, 1}, {2, 1}}), c.tol));
    });
    rec.add("standard_flags.g2", "standard flags are G₂-flags", [&] {
        for (int s = 1; s <= 3; ++s) {
            auto f = standard_flag<T>(s, 1);
            if (!is_G2_flag(f) || !is_partition(f) || !is_real_flag(f)) return Outcome(false, "s = " + std::to_string(s));
        }
        return Outcome(true);
    });
    rec.add("standard_flags.projection", "standard flags project to the real form of ℓ_{−α₁} ⊕ ℓ₀ ⊕ ℓ_{α₁}", [&] {
        auto phi0 = JetSubbundle<T>::constant(wb.lines({Weight{-1, 0}, Weight{0, 0}, Weight{1, 0}}), 1);
        if (!phi0.is_real()) return Outcome(false, "target is not real");
        for (int s = 1; s <= 3; ++s)
            if (!same(twistor_project(standard_flag<T>(s, 1)), phi0)) return Outcome(false, "s = " + std::to_string(s));
        return Outcome(true);
    });
}

// --- s6 ----------------------------------------------------------------------

void torus_checks(Recorder& rec, const Config& c) {
    Rng rng(c.seed);
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<cplx> pts;
    for (int k = 0; k < c.points; ++k) pts.emplace_back(u(rng), u(rng));
    const double pi = std::numbers::pi, thr = 1e-9;
    auto worst = [&](auto f) {
        double m = 0;
        for (auto z : pts) m = std::max(m, f(z));
        return Outcome(m < thr, m);
    };
    rec.add("torus.real", "F real", [&] {
        return worst([](cplx z) { auto F = vacuum_torus(z, 2).F; return (F - conj(F)).max_abs(); });
    });
    rec.add("torus.unit", "(F, F) = 1", [&] {
        return worst([](cplx z) {
            auto F = vacuum_torus(z, 2).F;
            return (dot(F, F) - Jet<cplx>::constant(1.0, 2)).max_abs();
        });
    });
    rec.add("torus.almost_complex", "F × F_z = i F_z", [&] {
        return worst([](cplx z) {
            auto F = vacuum_torus(z, 3).F;
            auto Fz = dz(F);
            return (cross(F.truncated(Fz.order()), Fz) - cplx(0, 1) * Fz).max_abs();
        });
    });
    rec.add("torus.periods", "periods π and iπ/√3", [&] {
        return worst([&](cplx z) {
            auto F = vacuum_torus_value(z);
            return std::max((vacuum_torus_value(z + pi) - F).max_abs(),
                            (vacuum_torus_value(z + cplx(0, pi / std::sqrt(3.0))) - F).max_abs());
        });
    });
    rec.add("torus.harmonic", "F_{zz̄} + (F_z, F_z̄) F = 0", [&] {
        return worst([](cplx z) {
            auto F = vacuum_torus(z, 3).F;
            auto Fz = dz(F), Fzb = dzbar(F);
            auto lap = dzbar(Fz);
            const int n = lap.order();
            return (lap + dot(Fz.truncated(n), Fzb.truncated(n)) * F.truncated(n)).max_abs();
        });
    });
    rec.add("torus.flag_g2", "ψ-flag of the torus map is a G₂-flag", [&] {
        auto f = ac_flag(vacuum_torus(pts.at(0), 5, 1e-8));
        return Outcome(is_G2_flag(f) && is_partition(f));
    });
    rec.add("torus.flag_pattern", "only ψ_i → ψ_{i+1}, ψ₂ → ψ₋₃, ψ₃ → ψ₋₂ may be nonzero", [&] {
        auto f = ac_flag(vacuum_torus(pts.at(0), 5, 1e-8));
        for (auto [i, j] : nonzero_sff(f)) {
            bool allowed = j == i + 1 || (i == 2 && j == -3) || (i == 3 && j == -2);
            if (!allowed) return Outcome(false, "A'(" + std::to_string(i) + "," + std::to_string(j) + ") ≠ 0");
        }
        return Outcome(true);
    });
    rec.add("torus.f_phi_roundtrip", "F ↦ φ = G″(f) ⊕ f ⊕ G′(f) ↦ F", [&] {
        auto m = vacuum_torus(pts.at(0), 5);
        auto back = acmap_from_phi(phi_from_acmap(m));
        double r = (back.F - m.F.truncated(back.order())).max_abs();
        return Outcome(r < 1e-8, r);
    });
}

template <class T>
void s6_suite(Recorder& rec, const Config& c) {
    torus_checks(rec, c);
    const int N = c.jet_order;
    const T z0 = is_exact_v<T> ? T(0) : from_double<T>(0.5);
    rec.add("quadric.superhorizontal", "generated curves satisfy H·H = 0 and H × H′ = 0", [&] {
        for (int id = 0; id < 3; ++id)
            if (!is_q5_isotropic(superhorizontal_poly(id)) || !superhorizontal_q5_check(superhorizontal_poly(id)))
                return Outcome(false, "id " + std::to_string(id));
        return Outcome(!superhorizontal_q5_check(non_superhorizontal_q5()), "non-superhorizontal control rejected");
    });
    rec.add("bryant.almost_complex", "curve in the quadric gives an almost complex map", [&] {
        auto m = bryant_map(superhorizontal_poly(0), z0, N + 1, c.tol);
        return Outcome(m.is_real() && m.is_unit() && m.is_almost_complex() && is_superhorizontal(ac_flag(m)));
    });
    rec.add("three_maps.s_values", "G^{(−i)}(f) ⊕ f ⊕ G^{(i)}(f) has s = 1, 3, 1", [&] {
        Q5Curve h = superhorizontal_poly(0);
        std::string got;
        bool ok = true;
        for (int i = 1; i <= 3; ++i) {
            auto phi = three_map_family(h, i, z0, N, c.tol);
            auto s = s_invariant(phi);
            ok = ok && is_harmonic(phi) && phi.is_real() && s == (i == 2 ? 3 : 1);
            got += (s ? std::to_string(*s) : "none") + (i < 3 ? "," : "");
        }
        return Outcome(ok, "s = " + got);
    });
    rec.add("uniton_pair.s2", "f ⊕ α ⊕ ᾱ has s = 2", [&] {
        Q5Curve h = superhorizontal_poly(0);
        Jet<T> a = Jet<T>::constant(T(1), N + 2) + T(2) * Jet<T>::z(N + 2);
        Jet<T> b = Jet<T>::constant(T(1), N + 2) - Jet<T>::z(N + 2);
        auto phi = example_s2_map(h, z0, example_s2_alpha(h, z0, N + 1, a, b, c.tol), c.tol);
        return Outcome(is_harmonic(phi) && phi.is_real() && s_invariant(phi) == 2);
    });
}

// --- twistor -----------------------------------------------------------------

template <class T>
Outcome lift_outcome(const JetSubbundle<T>& phi, int s) {
    auto got = s_invariant(phi);
    if (got != s) return Outcome(false, "s(φ) = " + (got ? std::to_string(*got) : std::string("none")));
    auto L = lift(phi);
    for (auto& item : check_lift(phi, L))
        if (!item.ok) return Outcome(false, item.name);
    return Outcome(true, L.branch.empty() ? std::string() : "branch " + L.branch);
}

template <class T>
void twistor_suite(Recorder& rec, const Config& c) {
    const int N = c.jet_order;
    const T z0 = is_exact_v<T> ? T(0) : from_double<T>(0.5);
    Q5Curve h = superhorizontal_poly(0);
    std::vector<JetSubbundle<T>> harmonic;
    std::vector<JetSubbundle<cplx>> harmonic_f;

    rec.add("lift.s1", "torus φ = G″(f) ⊕ f ⊕ G′(f) has s = 1 and a J₂-holomorphic lift", [&] {
        auto in = map_from_json<cplx>({{"generator", "vacuum_torus"}, {"z0", {0.1, 0.2}}}, std::max(N, 3), c.tol);
        harmonic_f.push_back(in.phi);
        return lift_outcome(in.phi, 1);
    });
    rec.add("lift.s1_family", "G^{(∓i)}(f) ⊕ f, i = 1, 3 lift into T₁", [&] {
        for (int i : {1, 3}) {
            auto phi = three_map_family(h, i, z0, N, c.tol);
            harmonic.push_back(phi);
            auto o = lift_outcome(phi, 1);
            if (!o.ok) return o;
        }
        return Outcome(true);
    });
    rec.add("lift.s2", "uniton pair lifts into T₂ with ψ₂ = ᾱ", [&] {
        Jet<T> a = Jet<T>::constant(T(1), N + 2) + T(2) * Jet<T>::z(N + 2);
        Jet<T> b = Jet<T>::constant(T(1), N + 2) - Jet<T>::z(N + 2);
        auto alpha = example_s2_alpha(h, z0, N + 1, a, b, c.tol);
        auto phi = example_s2_map(h, z0, alpha, c.tol);
        harmonic.push_back(phi);
        auto o = lift_outcome(phi, 2);
        if (!o.ok) return o;
        auto L = lift_s2(phi);
        return Outcome(same(L.flag.leg(2), alpha.conj().truncated(L.flag.order())), "ψ₂ = ᾱ");
    });
    rec.add("lift.s3", "G^{(−2)}(f) ⊕ f ⊕ G^{(2)}(f) lifts into T₃", [&] {
        auto phi = three_map_family(h, 2, z0, N, c.tol);
        harmonic.push_back(phi);
        return lift_outcome(phi, 3);
    });
    rec.add("nilorder_relation", "r − 1 ≤ 2s(φ) ≤ r + 1", [&] {
        std::string bad;
        auto check = [&](const auto& phi) {
            auto r = nilorder(phi);
            auto s = s_invariant(phi);
            if (!r || !s || *r - 1 > 2 * *s || 2 * *s > *r + 1) bad += "(r, s) = (" + (r ? std::to_string(*r) : "-") + ", " +
                                                                     (s ? std::to_string(*s) : "-") + ") ";
        };
        for (auto& p : harmonic) check(p);
        for (auto& p : harmonic_f) check(p);
        if (harmonic.size() + harmonic_f.size() < 5) return Outcome(false, "fixtures missing");
        return Outcome(bad.empty(), bad.empty() ? std::to_string(harmonic.size() + harmonic_f.size()) + " fixtures" : bad);
    });
    rec.add("lift.not_nilconformal", "geodesic with non-nilpotent A_z is rejected", [&] {
        auto in = map_from_json<T>({{"generator", "geodesic"}, {"profile", "x"}}, N, c.tol);
        try {
            lift(in.phi);
        } catch (const NotNilconformal&) {
            return Outcome(is_harmonic(in.phi));
        }
        return Outcome(false, "no error");
    });
    rec.add("lift.not_harmonic", "non-harmonic input is rejected", [&] {
        auto in = map_from_json<T>({{"generator", "geodesic"}, {"profile", "zzbar"}}, N, c.tol);
        try {
            lift(in.phi);
        } catch (const NotHarmonic&) {
            return Outcome(true);
        }
        return Outcome(false, "no error");
    });
}

// --- loops -------------------------------------------------------------------

template <class T>
void loops_s2(Recorder& rec, const Config& c) {
    const int N = c.jet_order;
    const T z0(0), t = from_double<T>(c.t);
    Q5Curve h = superhorizontal_poly(0);
    Jet<T> a = Jet<T>::constant(T(1), N + 2), b(N + 2);
    std::optional<MatrixLoop<T>> Phi;
    std::optional<GrassModel<T>> W;
    auto need = [&] {
        if (!Phi) {
            Phi = uniton_pair_loop(h, z0, N, a, b, t, c.tol);
            W = grassmannian_model(*Phi, c.tol);
        }
    };
    const bool generic = c.t != 0.0;
    rec.add("degree", "λ²Φ has degree exactly 4", [&] {
        need();
        auto p = Phi->pruned(c.tol);
        int d = p.dmax() - p.dmin();
        return Outcome(d == 4, "degree " + std::to_string(d));
    });
    rec.add("unitary", "Φ unitary on the circle, based, real", [&] {
        need();
        return Outcome(is_unitary_on_circle(*Phi) && is_unitary(*Phi, c.tol) && is_based(*Phi, c.tol) && is_real_loop(*Phi, c.tol));
    });
    rec.add("extended_solution", "Φ⁻¹∂Φ = (1 − λ⁻¹)A_z", [&] {
        need();
        return Outcome(is_extended_solution(*Phi, c.tol));
    });
    rec.add("real_form", "W̄⊥ = λW", [&] {
        need();
        return Outcome(check_real_form(*W));
    });
    rec.add("closure", "W × W ⊆ W", [&] {
        need();
        return Outcome(check_vector_closure(*W));
    });
    rec.add("basis", "W/λW spanned by the graded Gauss sections", [&] {
        need();
        auto Hs = q5_gauss_sections(h, z0, N);
        Jet<T> ta = t * a.truncated(N), mone = Jet<T>::constant(T(-1), N);
        auto mono = [](int k, const JetVec7<T>& v) { return LoopVec<T>::mono(k, v); };
        std::vector<LoopVec<T>> basis{mono(-2, Hs[0]) + mono(0, ta * Hs[4]), mono(-1, Hs[1]),
                                      mono(-1, Hs[2]) + mono(1, mone * (ta * Hs[6])), mono(0, Hs[3]),
                                      mono(1, Hs[4]), mono(1, Hs[5]), mono(2, Hs[6])};
        int in = 0;
        for (auto& u : basis) in += W->contains(u);
        return Outcome(in == 7, std::to_string(in) + "/7 in W");
    });
    rec.add("s1_invariance", generic ? "π_α and π_A do not commute: Φ not S¹-invariant" : "t = 0 loop is S¹-invariant", [&] {
        need();
        auto Phi0 = uniton_pair_loop(h, z0, N, a, b, T(0), c.tol);
        bool lim = is_s1_invariant(Phi0, c.tol);
        return Outcome(lim && (generic ? !is_s1_invariant(*Phi, c.tol) : true));
    });
    rec.add("harmonic_map", "canonical lift projects to f ⊕ α ⊕ ᾱ with s = 2", [&] {
        need();
        auto L = canonical_lift(*W);
        if (!is_G2_flag(L) || !is_J2_holomorphic(L)) return Outcome(false, "lift is not a J₂-holomorphic G₂-flag");
        auto phi = twistor_project(L);
        if (!generic) return Outcome(s_invariant(phi) == 1, "t = 0: s = 1");
        auto alpha = example_s2_alpha(h, z0, N, t * a, t * b, c.tol);
        return Outcome(same(phi, example_s2_map(h, z0, alpha, c.tol).truncated(phi.order())) && s_invariant(phi) == 2);
    });
    rec.add("uniton_number", "uniton number 4, decided at jet order 6", [&] {
        auto P6 = uniton_pair_loop(h, z0, 6, Jet<T>::constant(T(1), 8), Jet<T>(8), t, c.tol);
        auto u = uniton_number(P6, c.tol);
        return Outcome(u.value == 4 && u.exact, std::to_string(u.value) + (u.exact ? " (exact)" : " (bound)"));
    });
    rec.add("factorization", "Φ = P_A P_α with last uniton α", [&] {
        need();
        auto fac = alternating_factorization(*Phi, c.tol);
        if (!generic) return Outcome(fac.size() == 2);
        auto alpha = example_s2_alpha(h, z0, N, t * a, t * b, c.tol);
        return Outcome(fac.size() == 2 && same(fac[1], alpha.truncated(fac[1].order())));
    });
}

template <class T>
void loops_s3(Recorder& rec, const Config& c) {
    const int N = std::min(c.jet_order, 3);
    const T z0(0), t = from_double<T>(c.t);
    Q5Curve h = superhorizontal_poly(0);
    Jet<T> b = Jet<T>::constant(T(1), N + 5) + T(2) * Jet<T>::z(N + 5);
    std::optional<GrassModel<T>> W;
    auto need = [&] {
        if (!W) W = osculating_model(h, z0, N, b, t, c.tol);
    };
    const bool generic = c.t != 0.0;
    rec.add("containment", "λ³H₊ ⊆ W ⊆ λ⁻³H₊ with s = 3 minimal", [&] {
        need();
        return Outcome(W->dmin() == -3 && W->dmax() == 3 && W->s() == 3);
    });
    rec.add("real_form", "W̄⊥ = λW", [&] {
        need();
        return Outcome(check_real_form(*W));
    });
    rec.add("closure", "W × W ⊆ W", [&] {
        need();
        return Outcome(check_vector_closure(*W));
    });
    rec.add("basis", "W/λW spanned by λ⁻³(H + tλ⁴bH₅), λ⁻²(H₁ + tλ⁴bH₆), λ^{i−3}H_i", [&] {
        need();
        auto Hs = q5_gauss_sections(h, z0, N);
        Jet<T> tb = t * b.truncated(N);
        auto mono = [](int k, const JetVec7<T>& v) { return LoopVec<T>::mono(k, v); };
        int in = W->contains(mono(-3, Hs[0]) + mono(1, tb * Hs[5])) + W->contains(mono(-2, Hs[1]) + mono(2, tb * Hs[6]));
        for (int i = 2; i <= 6; ++i) in += W->contains(mono(i - 3, Hs[size_t(i)]));
        return Outcome(in == 7, std::to_string(in) + "/7 in W");
    });
    rec.add("extended_solution", "Φ based, real, extended solution", [&] {
        need();
        auto& P = *W->phi;
        return Outcome(is_unitary(P, c.tol) && is_based(P, c.tol) && is_real_loop(P, c.tol) && is_extended_solution(P, c.tol));
    });
    rec.add("lift_closure", "A_i × A_j ⊆ A_{i+j}: canonical lift is a J₂-holomorphic G₂-flag", [&] {
        need();
        auto L = canonical_lift(*W);
        auto phi = twistor_project(L);
        return Outcome(is_G2_flag(L) && is_J2_holomorphic(L) && is_harmonic(phi) && s_invariant(phi) == 3);
    });
    rec.add("last_uniton", "γ₆ = span{H + tbH₅}", [&] {
        need();
        auto Hs = q5_gauss_sections(h, z0, N);
        auto g6 = JetSubbundle<T>::from_sections({Hs[0] + (t * b.truncated(N)) * Hs[5]}, N, c.tol);
        auto fac = alternating_factorization(*W->phi, c.tol);
        auto L = canonical_lift(*W);
        return Outcome(fac.size() == 3 && same(fac[2], g6.truncated(fac[2].order())) &&
                       same(L.leg(-3), g6.truncated(L.order())));
    });
    rec.add("s1_invariance", generic ? "Φ not S¹-invariant, t = 0 limit is" : "t = 0 loop is S¹-invariant", [&] {
        need();
        auto W0 = osculating_model(h, z0, N, b, T(0), c.tol);
        return Outcome(is_s1_invariant(*W0.phi, c.tol) && (generic ? !is_s1_invariant(*W->phi, c.tol) : true));
    });
    rec.add("uniton_number", "uniton number 6, decided at jet order 6", [&] {
        Jet<T> b6 = Jet<T>::constant(T(1), 11) + T(2) * Jet<T>::z(11);
        auto u = uniton_number(*osculating_model(h, z0, 6, b6, t, c.tol).phi, c.tol);
        return Outcome(u.value == 6 && u.exact, std::to_string(u.value) + (u.exact ? " (exact)" : " (bound)"));
    });
}

template <class T>
void loops_suite(Recorder& rec, const Config& c) {
    auto base = rec.prefix;
    if (c.example == "s2" || c.example == "all") {
        rec.prefix = base + "s2.";
        loops_s2<T>(rec, c);
    }
    if (c.example == "s3" || c.example == "all") {
        rec.prefix = base + "s3.";
        loops_s3<T>(rec, c);
    }
    rec.prefix = base;
}

template <class T>
void run_one(const std::string& suite, Recorder& rec, const Config& c) {
    rec.prefix = suite + ".";
    if (suite == "algebra") algebra_suite<T>(rec, c);
    else if (suite == "weights") weights_suite<T>(rec, c);
    else if (suite == "s6") s6_suite<T>(rec, c);
    else if (suite == "twistor") twistor_suite<T>(rec, c);
    else if (suite == "loops") loops_suite<T>(rec, c);
}

}  // namespace

void validate(const Config& c) {
    if (c.backend != "exact" && c.backend != "float") throw InputError("backend must be exact or float");
    if (!(c.tol > 0) || c.tol >= 1) throw InputError("tolerance must lie in (0, 1)");
    if (c.jet_order < 2 || c.jet_order > 8) throw InputError("jet order must lie in [2, 8]");
    if (c.points < 1) throw InputError("points must be positive");
    if (c.example != "s2" && c.example != "s3" && c.example != "all") throw InputError("example must be s2, s3 or all");
    if (!std::isfinite(c.t)) throw InputError("t must be finite");
}

json config_to_json(const Config& c) {
    return {{"backend", c.backend}, {"tol", c.tol},         {"jet_order", c.jet_order}, {"seed", c.seed},
            {"points", c.points},   {"example", c.example}, {"t", c.t}};
}

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == "pass"; });
}

void Report::sort_checks() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
}

json Report::to_json() const {
    json cs = json::array();
    int passed = 0;
    for (auto& c : checks) {
        json j = {{"id", c.id}, {"status", c.status}, {"anchor", c.anchor}};
        j["residual"] = c.residual ? json(*c.residual) : json(nullptr);
        if (!c.detail.empty()) j["detail"] = c.detail;
        cs.push_back(j);
        passed += c.status == "pass";
    }
    return {{"suite", suite},
            {"checks", cs},
            {"config", config_to_json(config)},
            {"passed", passed},
            {"failed", int(checks.size()) - passed}};
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "suite " << suite << "  backend=" << config.backend << " tol=" << config.tol << " jet-order=" << config.jet_order
       << " seed=" << config.seed << "\n";
    size_t w = 0;
    for (auto& c : checks) w = std::max(w, c.id.size());
    int passed = 0;
    for (auto& c : checks) {
        std::string st = c.status == "pass" ? "PASS " : c.status == "fail" ? "FAIL " : "ERROR";
        os << st << " " << std::left << std::setw(int(w)) << c.id;
        std::ostringstream res;
        if (c.residual) res << "res=" << std::scientific << std::setprecision(2) << *c.residual;
        os << "  " << std::setw(12) << res.str() << "  " << c.anchor;
        if (!c.detail.empty()) os << "  [" << c.detail << "]";
        os << "\n";
        passed += c.status == "pass";
    }
    os << passed << "/" << checks.size() << " checks passed\n";
    return os.str();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "weights", "s6", "twistor", "loops", "all"};
    return names;
}

Report run_suite(const std::string& suite, const Config& config) {
    validate(config);
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw InputError("unknown suite \"" + suite + "\"");
    Report r;
    r.suite = suite;
    r.config = config;
    Recorder rec{r, ""};
    std::vector<std::string> todo;
    if (suite == "all") todo.assign(suite_names().begin(), suite_names().end() - 1);
    else todo.push_back(suite);
    for (auto& s : todo) {
        if (config.backend == "exact") run_one<QI>(s, rec, config);
        else run_one<cplx>(s, rec, config);
    }
    r.sort_checks();
    return r;
}

}  // namespace g2t

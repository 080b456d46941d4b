// Acceptance criteria: one PASS/FAIL line each, exit status 0 iff all pass.
#include "g2t/generators.hpp"
#include "g2t/random.hpp"
#include "g2t/verify.hpp"
#include "oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <set>

using namespace g2t;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

std::map<std::string, Check> checks_of(const std::string& suite, Config c) {
    std::map<std::string, Check> out;
    for (auto& ch : run_suite(suite, c).checks) out[ch.id] = ch;
    return out;
}

// Every listed id is present and passing; names the first that is not.
Verdict require(const std::map<std::string, Check>& got, std::initializer_list<std::string> ids, std::string tag = "") {
    for (auto& id : ids) {
        auto it = got.find(id);
        if (it == got.end()) return {false, tag + id + " missing"};
        if (it->second.status != "pass") return {false, tag + id + " " + it->second.status + " " + it->second.detail};
    }
    return {true, ""};
}

Verdict both(Verdict a, Verdict b) {
    if (!a.ok) return a;
    if (!b.ok) return b;
    return {true, a.detail.empty() ? b.detail : a.detail};
}

Config exact_config() { return Config{}; }

Config float_config() {
    Config c;
    c.backend = "float";
    return c;
}

// --- criteria -------------------------------------------------------------------

Verdict c1_identities() {
    Rng rng(Config{}.seed);
    std::vector<std::array<Vec7<QI>, 3>> triples;
    for (int n = 0; n < 1000; ++n) triples.push_back({random_vec<QI>(rng), random_vec<QI>(rng), random_vec<QI>(rng)});
    auto t0 = std::chrono::steady_clock::now();
    int bad = 0;
    for (auto& [u, v, w] : triples) {
        bad += !(dot(u, cross(v, w)) == dot(cross(u, v), w));
        bad += !(cross(u, cross(v, w)) + cross(cross(u, v), w) == QI(2) * dot(u, w) * v - dot(u, v) * w - dot(v, w) * u);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto v = require(checks_of("algebra", exact_config()), {"algebra.cross.triple_symmetry", "algebra.cross.double_product"});
    if (v.ok && bad) v = {false, std::to_string(bad) + " identity failures"};
    if (v.ok && secs >= 10) v = {false, "runtime " + std::to_string(secs) + " s"};
    if (v.ok) v.detail = "1000 exact triples, " + std::to_string(secs).substr(0, 5) + " s";
    return v;
}

Verdict c2_weights() {
    auto got = checks_of("weights", exact_config());
    auto v = require(got, {"weights.product_table", "weights.annihilator.top"});
    if (v.ok) v.detail = got.at("weights.product_table").detail;
    return v;
}

Verdict c3_standard_flags() {
    return require(checks_of("weights", exact_config()), {"weights.standard_flags.g2", "weights.standard_flags.projection"});
}

Verdict c4_positivity() {
    auto got = checks_of("algebra", exact_config());
    auto v = require(got, {"algebra.coassociative.positivity", "algebra.coassociative.orientation_scalar"});
    if (v.ok) v.detail = got.at("algebra.coassociative.positivity").detail;
    return v;
}

Verdict c5_torus() {
    Config c = float_config();
    c.points = 20;
    auto got = checks_of("s6", c);
    auto v = require(got, {"s6.torus.real", "s6.torus.unit", "s6.torus.almost_complex", "s6.torus.periods", "s6.torus.harmonic",
                           "s6.torus.flag_g2", "s6.torus.flag_pattern"});
    for (auto& [id, ch] : got)
        if (id.rfind("s6.torus.", 0) == 0 && ch.residual && *ch.residual >= 1e-9) v = {false, id + " residual too large"};
    if (v.ok) v.detail = "20 points";
    return v;
}

Verdict c6_lifts() {
    Verdict v{true, ""};
    for (auto& c : {exact_config(), float_config()}) {
        auto got = checks_of("twistor", c);
        v = both(v, require(got, {"twistor.lift.s1", "twistor.lift.s2", "twistor.lift.s3"}, c.backend + ": "));
    }
    // s_invariant and lift through the map generators as well
    struct Case {
        json in;
        int s;
    };
    std::vector<Case> cases{{{{"generator", "superhorizontal_poly"}, {"map", "uniton_pair"}, {"a", {1, 2}}, {"b", {1, -1}}}, 2},
                            {{{"generator", "superhorizontal_poly"}, {"i", 2}}, 3}};
    for (auto& [in, s] : cases) {
        auto m = map_from_json<QI>(in, 3);
        if (s_invariant(m.phi) != s) return {false, m.label + ": s mismatch"};
        if (!all_ok(check_lift(m.phi, lift(m.phi)))) return {false, m.label + ": lift check failed"};
    }
    auto torus = map_from_json<cplx>(json{{"generator", "vacuum_torus"}, {"z0", {0.3, 0.1}}}, 3);
    if (s_invariant(torus.phi) != 1 || !all_ok(check_lift(torus.phi, lift(torus.phi))))
        return {false, "torus lift at z0 = 0.3 + 0.1i"};
    if (v.ok) v.detail = "s = 1, 2, 3 on both backends";
    return v;
}

Verdict c7_loop_s2() {
    Verdict v{true, ""};
    for (auto& c0 : {exact_config(), float_config()}) {
        Config c = c0;
        c.example = "s2";
        v = both(v, require(checks_of("loops", c),
                            {"loops.s2.degree", "loops.s2.real_form", "loops.s2.closure", "loops.s2.basis",
                             "loops.s2.s1_invariance", "loops.s2.unitary", "loops.s2.extended_solution"},
                            c.backend + ": "));
    }
    return v;
}

Verdict c8_loop_s3() {
    Config c = exact_config();
    c.example = "s3";
    auto got = checks_of("loops", c);
    auto v = require(got, {"loops.s3.containment", "loops.s3.uniton_number", "loops.s3.lift_closure", "loops.s3.real_form",
                           "loops.s3.closure"});
    if (v.ok) v.detail = got.at("loops.s3.uniton_number").detail;
    return v;
}

Verdict c9_nilorder() {
    Verdict v{true, ""};
    for (auto& c : {exact_config(), float_config()})
        v = both(v, require(checks_of("twistor", c), {"twistor.nilorder_relation"}, c.backend + ": "));
    int n = 0;
    auto relation = [&](const auto& phi, const std::string& label) {
        auto r = nilorder(phi);
        auto s = s_invariant(phi);
        ++n;
        if (!r || !s || *r - 1 > 2 * *s || 2 * *s > *r + 1) v = {false, label + " violates the relation"};
    };
    for (int i = 1; i <= 3; ++i)
        relation(map_from_json<QI>(json{{"generator", "superhorizontal_poly"}, {"i", i}}, 3).phi, "family i" + std::to_string(i));
    relation(map_from_json<QI>(json{{"generator", "superhorizontal_poly"}, {"map", "uniton_pair"}}, 3).phi, "uniton pair");
    for (double x : {0.0, 0.25, 0.5})
        relation(map_from_json<cplx>(json{{"generator", "vacuum_torus"}, {"z0", {x, x / 2}}}, 3).phi, "torus");
    if (v.ok) v.detail = std::to_string(n) + " generator fixtures plus the suite fixtures";
    return v;
}

// --- criterion 10: brute-force oracle ---------------------------------------------

using OM = oracle::Matrix;

std::vector<QI> col(const Vec7<QI>& v) { return v.vec(); }

// Rows r_i with r_i · x = (x × b)_i.
void cross_rows(OM& rows, const std::vector<QI>& b) {
    for (int i = 0; i < 7; ++i) {
        std::vector<QI> r(7);
        for (int j = 0; j < 7; ++j) {
            std::vector<QI> e(7);
            e[size_t(j)] = QI(1);
            r[size_t(j)] = oracle::cross(e, b)[size_t(i)];
        }
        rows.push_back(r);
    }
}

// Rows r with r · x = (x, b), the complex bilinear form.
void dot_rows(OM& rows, const std::vector<QI>& b) { rows.push_back(b); }

bool same_span(const Subspace<QI>& V, OM basis) {
    if (int(basis.size()) != V.rank()) return false;
    if (basis.empty()) return true;
    OM all = basis;
    for (auto& v : V.basis()) all.push_back(col(v));
    return oracle::rank(all) == int(basis.size()) && oracle::rank(basis) == int(basis.size());
}

Verdict c10_oracle() {
    Rng rng(2024);
    const QI I = QI::unit_i();
    int ann = 0, ext = 0, pw = 0;

    for (int n = 0; n < 60; ++n) {
        std::vector<Vec7<QI>> vs;
        if (n % 3 == 0) {
            Mat<QI> Q = cayley_orthogonal(rng, 7);
            vs.push_back(Vec7<QI>::from(Q.col(0)) + I * Vec7<QI>::from(Q.col(1)));
        } else {
            for (int k = 0; k < n % 3; ++k) vs.push_back(random_vec<QI>(rng));
        }
        auto beta = Subspace<QI>::span(vs);
        OM rows;
        for (auto& b : beta.basis()) cross_rows(rows, col(b));
        if (!same_span(annihilator(beta), oracle::nullspace(rows, 7))) return {false, "annihilator instance " + std::to_string(n)};
        ++ann;
    }

    auto wb = build_weight_basis<QI>();
    auto xi0 = wb.lines({{-1, 0}, {0, 0}, {1, 0}});
    auto beta0 = wb.line({2, 1});
    for (int n = 0; n < 50; ++n) {
        Mat<QI> g = random_g2_rational(rng);
        auto xi = Subspace<QI>::span({apply(g, xi0[0]), apply(g, xi0[1]), apply(g, xi0[2])});
        auto beta = Subspace<QI>::span({apply(g, beta0[0])});
        auto b = col(beta[0]), bb = col(beta[0].conj());
        OM plus_rows, minus_rows;
        cross_rows(plus_rows, b);
        cross_rows(minus_rows, bb);
        dot_rows(minus_rows, b);
        for (auto& x : xi.basis()) {
            dot_rows(plus_rows, col(x));
            dot_rows(minus_rows, col(x));
        }
        OM plus = oracle::nullspace(plus_rows, 7), minus = oracle::nullspace(minus_rows, 7);
        minus.push_back(b);
        if (!same_span(extend_isotropic_line(beta, xi, Sign::Plus), plus) ||
            !same_span(extend_isotropic_line(beta, xi, Sign::Minus), minus))
            return {false, "extension instance " + std::to_string(n)};
        ++ext;
    }

    for (int n = 0; n < 60; ++n) {
        oracle::PolyMatrix frame(7, std::vector<oracle::Poly>(size_t(1 + n % 3)));
        for (auto& row : frame)
            for (auto& e : row)
                for (int d = 0; d <= 2; ++d)
                    for (int q = 0; q <= d; ++q) {
                        QI c(random_rational(rng, 3, 1), random_rational(rng, 3, 1));
                        if (!c.is_zero()) e.c[{d - q, q}] = c;
                    }
        JetMatrix<QI> S(7, int(frame[0].size()), 3);
        for (int i = 0; i < 7; ++i)
            for (size_t j = 0; j < frame[0].size(); ++j)
                for (auto& [k, v] : frame[size_t(i)][j].c) S(i, int(j)).at(k.first, k.second) = v;
        JetMatrix<QI> A = az_matrix(JetSubbundle<QI>::from_frame(S));
        OM Ao = oracle::az_at_base(frame), P = Ao;
        for (int r = 1; r <= 3; ++r) {
            auto M = matrix_power(A, r).eval0();
            for (int i = 0; i < 7; ++i)
                for (int j = 0; j < 7; ++j)
                    if (!(M(i, j) == P[size_t(i)][size_t(j)])) return {false, "A_z power instance " + std::to_string(n)};
            P = oracle::mat_mul(P, Ao);
        }
        ++pw;
    }
    return {true, std::to_string(ann) + " annihilators, " + std::to_string(ext) + " extensions, " + std::to_string(pw) +
                      " A_z power instances"};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"octonion identities", c1_identities},     {"weight table", c2_weights},
        {"standard flags", c3_standard_flags},      {"positivity vs coassociativity", c4_positivity},
        {"torus example", c5_torus},                {"lift round trips", c6_lifts},
        {"uniton-pair loop (s = 2)", c7_loop_s2},   {"osculating loop (s = 3)", c8_loop_s3},
        {"nilorder relation", c9_nilorder},         {"oracle equivalence", c10_oracle},
    };
    int failed = 0, k = 0;
    for (auto& [name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.ok;
        std::cout << (v.ok ? "PASS" : "FAIL") << "  " << ++k << ". " << name;
        if (!v.detail.empty()) std::cout << "  (" << v.detail << ")";
        std::cout << std::endl;
    }
    std::cout << (10 - failed) << "/10 acceptance criteria passed\n";
    return failed ? 1 : 0;
}

#include "g2t/commands.hpp"

#include "g2t/generators.hpp"

namespace g2t {

namespace {

Check make_check(std::string id, bool ok, std::string anchor, std::string detail = "") {
    return Check{std::move(id), ok ? "pass" : "fail", std::nullopt, std::move(anchor), std::move(detail)};
}

template <class T>
T parse_point(const std::string& s) {
    auto comma = s.find(',');
    json j = comma == std::string::npos ? json::array({s, "0"}) : json::array({s.substr(0, comma), s.substr(comma + 1)});
    for (auto& x : j) {
        std::string v = x.get<std::string>();
        try {
            size_t used = 0;
            double d = std::stod(v, &used);
            if (used == v.size()) x = d;
        } catch (const std::exception&) {
        }
    }
    return scalar_from_json<T>(j);
}

template <class T>
LiftResult lift_impl(const json& input, const Config& cfg, const std::string& s_req, const std::vector<std::string>& points) {
    if (s_req != "auto" && s_req != "1" && s_req != "2" && s_req != "3") throw InputError("s must be auto, 1, 2 or 3");
    std::vector<std::optional<T>> pts;
    for (auto& p : points) pts.push_back(parse_point<T>(p));
    if (pts.empty()) pts.push_back(std::nullopt);
    LiftResult out;
    Report& r = out.report;
    r.suite = "lift";
    r.config = cfg;
    json flags = json::array();
    for (size_t k = 0; k < pts.size(); ++k) {
        const std::string label = points.empty() ? "" : points[k];
        const std::string pre = "lift.p" + std::to_string(k) + ".";
        try {
            MapInput<T> in = map_from_json<T>(input, cfg.jet_order, cfg.tol, pts[k]);
            const auto& phi = in.phi;
            if (phi.order() >= 2 && !is_harmonic(phi)) throw NotHarmonic("input map is not harmonic");
            auto s = s_invariant(phi);
            if (!s) throw NotNilconformal("A_z is not nilpotent");
            int want = s_req == "auto" ? *s : std::stoi(s_req);
            std::string sd = "s = " + std::to_string(*s);
            if (want != *s) sd += ", requested " + std::to_string(want);
            r.checks.push_back(make_check(pre + "s", *s == want, "s(φ) selects the twistor space", sd));
            if (in.expected_s)
                r.checks.push_back(make_check(pre + "s_expected", *s == *in.expected_s, "generator's stated s",
                                              "expected " + std::to_string(*in.expected_s)));
            if (want != *s) continue;
            Lift<T> L = want == 1 ? lift_s1(phi) : want == 2 ? lift_s2(phi) : lift_s3(phi);
            for (auto& item : check_lift(phi, L)) r.checks.push_back(make_check(pre + item.name, item.ok, "lift invariant"));
            json fj = flag_to_json(L.flag);
            if (!label.empty()) fj["point"] = label;
            fj["s"] = L.s;
            fj["input"] = in.label;
            flags.push_back(fj);
        } catch (const NotHarmonic& e) {
            throw RejectedMap("NotHarmonic", label, e.what());
        } catch (const NotNilconformal& e) {
            throw RejectedMap("NotNilconformal", label, e.what());
        } catch (const RankDrop& e) {
            throw RejectedMap("RankDrop", label, e.what());
        } catch (const GramSingular& e) {
            throw RejectedMap("RankDrop", label, e.what());
        }
    }
    r.sort_checks();
    out.flags = flags.size() == 1 ? flags[0] : flags;
    return out;
}

template <class T>
MatrixLoop<T> example_loop(const std::string& example, double tval, int order, double tol) {
    Q5Curve h = superhorizontal_poly(0);
    T t;
    if constexpr (is_exact_v<T>) t = QI(mpq_class(tval));
    else t = cplx(tval);
    if (example == "s2")
        return uniton_pair_loop(h, T(0), order, Jet<T>::constant(T(1), order + 2), Jet<T>(order + 2), t, tol);
    if (example == "s3") {
        Jet<T> b = Jet<T>::constant(T(1), order + 5) + T(2) * Jet<T>::z(order + 5);
        return osculating_loop(h, T(0), order, b, t, tol);
    }
    throw InputError("loop build needs example s2 or s3");
}

template <class T>
Report check_loop_impl(const MatrixLoop<T>& phi, const Config& cfg) {
    Report r;
    r.suite = "loop";
    r.config = cfg;
    auto add = [&](const std::string& id, const std::string& anchor, auto f) {
        try {
            r.checks.push_back(make_check("loop." + id, f(), anchor));
        } catch (const std::exception& e) {
            r.checks.push_back(Check{"loop." + id, "error", std::nullopt, anchor, e.what()});
        }
    };
    const double tol = cfg.tol;
    add("unitary", "Φ*Φ = I", [&] { return is_unitary(phi, tol) && is_unitary_on_circle(phi); });
    add("based", "Φ(1) = I", [&] { return is_based(phi, tol); });
    add("real", "Φ real on the circle", [&] { return is_real_loop(phi, tol); });
    add("extended_solution", "Φ⁻¹∂Φ = (1 − λ⁻¹)A_z", [&] { return is_extended_solution(phi, tol); });
    std::optional<GrassModel<T>> W;
    add("model", "W = ΦH₊ has a λ-echelon basis", [&] {
        W = grassmannian_model(phi, tol);
        return true;
    });
    if (W) {
        add("real_form", "W̄⊥ = λW", [&] { return check_real_form(*W); });
        add("closure", "W × W ⊆ W", [&] { return check_vector_closure(*W); });
        add("canonical_lift", "canonical lift is a J₂-holomorphic G₂-flag", [&] {
            auto L = canonical_lift(*W);
            return is_G2_flag(L) && is_J2_holomorphic(L);
        });
        r.checks.push_back(make_check("loop.s", true, "least s with λ^s H₊ ⊆ W ⊆ λ^{−s} H₊", "s = " + std::to_string(W->s())));
    }
    auto u = uniton_number(phi, tol);
    r.checks.push_back(make_check("loop.uniton_number", true, "λ-degree span",
                                  std::to_string(u.value) +
                                      (u.exact ? " (exact)" : " (upper bound; fullness needs jet order 6)")));
    r.sort_checks();
    return r;
}

}  // namespace

LiftResult run_lift(const json& input, const Config& cfg, const std::string& s, const std::vector<std::string>& points) {
    validate(cfg);
    return cfg.backend == "exact" ? lift_impl<QI>(input, cfg, s, points) : lift_impl<cplx>(input, cfg, s, points);
}

json build_loop(const Config& cfg) {
    validate(cfg);
    if (cfg.backend == "exact") return loop_to_json(example_loop<QI>(cfg.example, cfg.t, cfg.jet_order, cfg.tol));
    return loop_to_json(example_loop<cplx>(cfg.example, cfg.t, cfg.jet_order, cfg.tol));
}

Report check_loop(const json& loop, const Config& cfg) {
    validate(cfg);
    if (cfg.backend == "exact") return check_loop_impl(loop_from_json<QI>(loop), cfg);
    return check_loop_impl(loop_from_json<cplx>(loop), cfg);
}

std::vector<std::pair<std::string, json>> fixture_files(const Config& cfg) {
    validate(cfg);
    std::vector<std::pair<std::string, json>> out;
    auto put = [&](std::string name, json j) { out.emplace_back(std::move(name), std::move(j)); };
    put("weight_basis_exact.json", weight_basis_to_json<QI>());
    put("weight_basis_float.json", weight_basis_to_json<cplx>());
    put("map_torus.json", {{"generator", "vacuum_torus"}, {"z0", {0.1, 0.2}}});
    for (int i = 1; i <= 3; ++i)
        put("map_family_i" + std::to_string(i) + ".json", {{"generator", "superhorizontal_poly"}, {"id", 0}, {"i", i}});
    put("map_uniton_pair.json",
        {{"generator", "superhorizontal_poly"}, {"id", 0}, {"map", "uniton_pair"}, {"a", {1, 2}}, {"b", {1, -1}}});
    put("map_geodesic.json", {{"generator", "geodesic"}, {"profile", "x"}});
    put("map_not_harmonic.json", {{"generator", "geodesic"}, {"profile", "zzbar"}});
    put("map_sections_s3.json", subbundle_to_json(three_map_family(superhorizontal_poly(0), 2, QI(0), cfg.jet_order)));
    put("loop_s2.json", loop_to_json(example_loop<QI>("s2", 1.0, cfg.jet_order, cfg.tol)));
    put("loop_s3.json", loop_to_json(example_loop<QI>("s3", 1.0, std::min(cfg.jet_order, 3), cfg.tol)));
    return out;
}

}  // namespace g2t

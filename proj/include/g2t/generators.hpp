#pragma once
#include "g2t/io.hpp"

#include <optional>
#include <string>

namespace g2t {

// exp(f X)·span{e₁, e₂, e₃} for a real jet f, with X ∈ so(7) exchanging e₁, e₂ and e₄, e₅.
// Harmonic iff f is; A_z = ∂f·(conjugate of X) is never nilpotent unless ∂f vanishes.
template <class T>
JetSubbundle<T> geodesic_plane_map(const Jet<T>& f, double tol = kDefaultTol) {
    const int n = f.order();
    if (f.eval0() != scalar_traits<T>::zero()) throw PreconditionError("geodesic_plane_map: f(0) must vanish");
    JetMatrix<T> M(7, 7, n);
    M(3, 0) = f;
    M(0, 3) = -f;
    M(4, 1) = f;
    M(1, 4) = -f;
    JetMatrix<T> E = JetMatrix<T>::identity(7, n), P = E;
    T fact = scalar_traits<T>::one();
    for (int k = 1; k <= n; ++k) {
        P = P * M;
        fact = fact * scalar_traits<T>::from_int(k);
        E = E + (scalar_traits<T>::one() / fact) * P;
    }
    return JetSubbundle<T>::from_frame(E.cols_at({0, 1, 2}), tol);
}

template <class T>
struct MapInput {
    std::string label;
    JetSubbundle<T> phi;
    std::optional<int> expected_s;
};

namespace detail {

// Polynomial in z from a coefficient list, each entry a number or [re, im].
template <class T>
Jet<T> poly_jet(const json& j, const T& z0, int order) {
    if (!j.is_array()) throw InputError("polynomial coefficients must be a list");
    std::vector<T> c;
    for (auto& x : j) c.push_back(scalar_from_json<T>(x));
    if (c.empty()) c.push_back(scalar_traits<T>::zero());
    return jet_of_polynomial(c, z0, order);
}

template <class T>
T base_point(const json& j, const std::optional<T>& z0) {
    if (z0) return *z0;
    if (j.contains("z0")) return scalar_from_json<T>(j.at("z0"));
    return scalar_traits<T>::zero();
}

}  // namespace detail

// Map-input JSON: {"order", "sections"} or a named generator; `order` is the requested jet order.
template <class T>
MapInput<T> map_from_json(const json& j, int order, double tol = kDefaultTol, const std::optional<T>& z0 = {}) {
    if (!j.is_object()) throw InputError("map input must be a JSON object");
    const std::string gen = j.value("generator", std::string("from_sections"));
    MapInput<T> in;
    in.label = gen;
    auto fit = [&](const JetSubbundle<T>& phi) { return phi.order() > order ? phi.truncated(order) : phi; };
    if (gen == "from_sections") {
        if (z0) throw InputError("from_sections input carries its own base point");
        in.phi = subbundle_from_json<T>(j, tol);
        return in;
    }
    if (gen == "vacuum_torus") {
        if constexpr (is_exact_v<T>) {
            throw InputError("vacuum_torus needs the float backend");
        } else {
            const std::string map = j.value("map", std::string("f_phi"));
            if (map != "f_phi") throw InputError("vacuum_torus: unknown map \"" + map + "\"");
            T z = detail::base_point<T>(j, z0);
            in.label += "/" + map;
            in.phi = fit(phi_from_acmap(vacuum_torus(z, order + 1, tol)));
            in.expected_s = 1;
            return in;
        }
    }
    if (gen == "superhorizontal_poly") {
        Q5Curve h = superhorizontal_poly(j.value("id", 0));
        T z = detail::base_point<T>(j, z0);
        const std::string map = j.value("map", std::string("family"));
        in.label += "/" + map;
        if (map == "family") {
            int i = j.value("i", 2);
            in.phi = three_map_family(h, i, z, order, tol);
            in.expected_s = i == 2 ? 3 : 1;
        } else if (map == "uniton_pair") {
            Jet<T> a = detail::poly_jet<T>(j.value("a", json::array({1})), z, order + 2);
            Jet<T> b = detail::poly_jet<T>(j.value("b", json::array({0})), z, order + 2);
            in.phi = fit(example_s2_map(h, z, example_s2_alpha(h, z, order + 1, a, b, tol), tol));
            in.expected_s = 2;
        } else {
            throw InputError("superhorizontal_poly: unknown map \"" + map + "\"");
        }
        return in;
    }
    if (gen == "geodesic") {
        if (z0) throw InputError("geodesic input is centred at 0");
        const std::string profile = j.value("profile", std::string("x"));
        Jet<T> z = Jet<T>::z(order), zb = Jet<T>::zbar(order);
        Jet<T> f;
        if (profile == "x") f = (scalar_traits<T>::one() / scalar_traits<T>::from_int(2)) * (z + zb);
        else if (profile == "zzbar") f = z * zb;
        else throw InputError("geodesic: unknown profile \"" + profile + "\"");
        in.label += "/" + profile;
        in.phi = geodesic_plane_map(f, tol);
        return in;
    }
    throw InputError("unknown generator \"" + gen + "\"");
}

}  // namespace g2t

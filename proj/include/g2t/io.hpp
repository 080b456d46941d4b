#pragma once
#include "g2t/loops.hpp"

#include <json.hpp>

#include <string>

namespace g2t {

using json = nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Exact parts are integers when possible and "p/q" strings otherwise, so output round-trips.
inline json rational_to_json(const mpq_class& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

inline mpq_class rational_from_json(const json& j) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_number()) return mpq_class(j.get<double>());
    if (j.is_string()) {
        try {
            mpq_class q(j.get<std::string>());
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
        }
    }
    throw InputError("expected a rational number, got " + j.dump());
}

inline double real_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    return rational_from_json(j).get_d();
}

}  // namespace detail

template <class T>
json scalar_to_json(const T& x) {
    if constexpr (is_exact_v<T>) return json::array({detail::rational_to_json(x.re), detail::rational_to_json(x.im)});
    else return json::array({x.real(), x.imag()});
}

template <class T>
T scalar_from_json(json j) {
    if (j.is_number() || j.is_string()) j = json::array({j, 0});
    if (!j.is_array() || j.size() != 2) throw InputError("expected [re, im], got " + j.dump());
    if constexpr (is_exact_v<T>) return QI(detail::rational_from_json(j[0]), detail::rational_from_json(j[1]));
    else return cplx(detail::real_from_json(j[0]), detail::real_from_json(j[1]));
}

template <class T>
json jet_to_json(const Jet<T>& a) {
    json c = json::object();
    for (int d = 0; d <= a.order(); ++d)
        for (int q = 0; q <= d; ++q) {
            const T& x = a.at(d - q, q);
            if (x != scalar_traits<T>::zero()) c[std::to_string(d - q) + "," + std::to_string(q)] = scalar_to_json(x);
        }
    return {{"order", a.order()}, {"coeffs", c}};
}

template <class T>
Jet<T> jet_from_json(const json& j) {
    if (!j.is_object() || !j.contains("order")) throw InputError("jet needs an \"order\" field");
    const int n = j.at("order").get<int>();
    if (n < 0) throw InputError("jet order must be non-negative");
    Jet<T> a(n);
    if (j.contains("coeffs"))
        for (auto& [key, val] : j.at("coeffs").items()) {
            int p = -1, q = -1;
            if (std::sscanf(key.c_str(), "%d,%d", &p, &q) != 2 || p < 0 || q < 0)
                throw InputError("bad jet coefficient key \"" + key + "\"");
            if (p + q <= n) a.at(p, q) = scalar_from_json<T>(val);
        }
    return a;
}

template <class T>
json jetvec_to_json(const JetVec7<T>& v) {
    json a = json::array();
    for (int i = 0; i < 7; ++i) a.push_back(jet_to_json(v[i]));
    return a;
}

template <class T>
JetVec7<T> jetvec_from_json(const json& j, int order) {
    if (!j.is_array() || j.size() != 7) throw InputError("a section is a list of 7 jets");
    JetVec7<T> v(order);
    for (int i = 0; i < 7; ++i) {
        Jet<T> a = jet_from_json<T>(j[size_t(i)]);
        if (a.order() < order) throw InputError("section jet order below the declared order");
        v[i] = a.truncated(order);
    }
    return v;
}

template <class T>
json subspace_to_json(const Subspace<T>& V) {
    json b = json::array();
    for (auto& v : V.basis()) {
        json col = json::array();
        for (int i = 0; i < 7; ++i) col.push_back(scalar_to_json(v[i]));
        b.push_back(col);
    }
    return {{"basis", b}};
}

template <class T>
Subspace<T> subspace_from_json(const json& j, double tol = kDefaultTol) {
    std::vector<Vec7<T>> vs;
    for (auto& col : j.at("basis")) {
        if (col.size() != 7) throw InputError("subspace basis vectors have 7 entries");
        Vec7<T> v;
        for (int i = 0; i < 7; ++i) v[i] = scalar_from_json<T>(col[size_t(i)]);
        vs.push_back(v);
    }
    auto V = Subspace<T>::span(vs, tol);
    if (V.rank() != int(vs.size())) throw InputError("subspace basis is not independent");
    return V;
}

template <class T>
json subbundle_to_json(const JetSubbundle<T>& b) {
    json s = json::array();
    for (auto& v : b.sections()) s.push_back(jetvec_to_json(v));
    return {{"order", b.order()}, {"rank", b.rank()}, {"sections", s}};
}

template <class T>
JetSubbundle<T> subbundle_from_json(const json& j, double tol = kDefaultTol) {
    if (!j.is_object() || !j.contains("order") || !j.contains("sections"))
        throw InputError("subbundle JSON needs \"order\" and \"sections\"");
    const int n = j.at("order").get<int>();
    std::vector<JetVec7<T>> secs;
    for (auto& s : j.at("sections")) secs.push_back(jetvec_from_json<T>(s, n));
    if (secs.empty()) return JetSubbundle<T>::zero(n);
    try {
        return JetSubbundle<T>::from_frame(JetMatrix<T>::from_cols(secs, n), tol);
    } catch (const GramSingular& e) {
        throw InputError(std::string("sections are dependent at the base point: ") + e.what());
    }
}

template <class T>
json flag_to_json(const Flag<T>& f) {
    json legs = json::array();
    for (int i = f.lo; i <= f.hi(); ++i) {
        json l = subbundle_to_json(f.leg(i));
        l["index"] = i;
        legs.push_back(l);
    }
    return {{"lo", f.lo}, {"legs", legs}};
}

template <class T>
Flag<T> flag_from_json(const json& j, double tol = kDefaultTol) {
    Flag<T> f;
    f.lo = j.at("lo").get<int>();
    int expect = f.lo;
    for (auto& l : j.at("legs")) {
        if (l.contains("index") && l.at("index").get<int>() != expect) throw InputError("flag legs must be consecutive");
        f.legs.push_back(subbundle_from_json<T>(l, tol));
        ++expect;
    }
    return f;
}

template <class T>
json loop_to_json(const MatrixLoop<T>& phi) {
    json c = json::object();
    for (auto& [k, m] : phi.c) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) {
            json r = json::array();
            for (int j = 0; j < m.cols(); ++j) r.push_back(jet_to_json(m(i, j)));
            rows.push_back(r);
        }
        c[std::to_string(k)] = rows;
    }
    return {{"coeffs", c}};
}

template <class T>
MatrixLoop<T> loop_from_json(const json& j) {
    if (!j.is_object() || !j.contains("coeffs")) throw InputError("loop JSON needs \"coeffs\"");
    MatrixLoop<T> phi;
    int n = 1 << 20;
    std::map<int, std::vector<std::vector<Jet<T>>>> raw;
    for (auto& [key, rows] : j.at("coeffs").items()) {
        int k = 0;
        try {
            k = std::stoi(key);
        } catch (const std::exception&) {
            throw InputError("bad loop degree \"" + key + "\"");
        }
        if (rows.size() != 7) throw InputError("loop coefficients are 7 × 7");
        for (auto& r : rows) {
            if (r.size() != 7) throw InputError("loop coefficients are 7 × 7");
            raw[k].emplace_back();
            for (auto& e : r) {
                raw[k].back().push_back(jet_from_json<T>(e));
                n = std::min(n, raw[k].back().back().order());
            }
        }
    }
    if (raw.empty()) throw InputError("loop has no coefficients");
    for (auto& [k, rows] : raw) {
        JetMatrix<T> m(7, 7, n);
        for (int i = 0; i < 7; ++i)
            for (int jj = 0; jj < 7; ++jj) m(i, jj) = rows[size_t(i)][size_t(jj)].truncated(n);
        phi.c[k] = m;
    }
    return phi;
}

template <class T>
json model_to_json(const GrassModel<T>& W) {
    json g = json::array();
    for (size_t j = 0; j < W.gens.size(); ++j) {
        json c = json::object();
        for (auto& [k, v] : W.gens[j].c) c[std::to_string(k)] = jetvec_to_json(v);
        g.push_back({{"degree", W.degrees[j]}, {"coeffs", c}});
    }
    return {{"generators", g}};
}

template <class T>
json weight_basis_to_json() {
    auto wb = build_weight_basis<T>();
    json out = json::array();
    for (auto& w : short_weights()) {
        json v = json::array();
        for (int i = 0; i < 7; ++i) v.push_back(scalar_to_json(wb[w][i]));
        out.push_back({{"weight", {w.a, w.b}}, {"label", weight_label(w)}, {"vector", v}});
    }
    return out;
}

}  // namespace g2t

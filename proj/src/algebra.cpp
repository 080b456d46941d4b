#include "g2t/algebra.hpp"

#include <sstream>

namespace g2t {

std::string QI::str() const {
    std::ostringstream os;
    os << re.get_str();
    if (sgn(im) != 0) os << (sgn(im) > 0 ? "+" : "-") << mpq_class(abs(im)).get_str() << "i";
    return os.str();
}

const CrossTable& cross_table() {
    static const CrossTable t = [] {
        CrossTable c{};
        for (auto& line : kFanoLines) {
            for (int r = 0; r < 3; ++r) {
                int a = line[r], b = line[(r + 1) % 3], k = line[(r + 2) % 3];
                c.idx[a][b] = k;
                c.sgn[a][b] = 1;
                c.idx[b][a] = k;
                c.sgn[b][a] = -1;
            }
        }
        return c;
    }();
    return t;
}

bool is_weight(const Weight& w) {
    for (auto& x : short_weights())
        if (x == w) return true;
    return false;
}

const std::array<Weight, 12>& roots() {
    static const std::array<Weight, 12> r{Weight{1, 0},  Weight{0, 1},   Weight{1, 1},   Weight{2, 1},
                                          Weight{3, 1},  Weight{3, 2},   Weight{-1, 0},  Weight{0, -1},
                                          Weight{-1, -1}, Weight{-2, -1}, Weight{-3, -1}, Weight{-3, -2}};
    return r;
}

std::string weight_label(const Weight& w) {
    if (w.a == 0 && w.b == 0) return "0";
    std::string s;
    auto term = [&](int c, const char* name) {
        if (c == 0) return;
        if (c < 0) s += "-";
        else if (!s.empty()) s += "+";
        if (std::abs(c) != 1) s += std::to_string(std::abs(c));
        s += name;
    };
    term(w.a, "a1");
    term(w.b, "a2");
    return s;
}

const std::vector<Mat<QI>>& g2_basis() {
    static const std::vector<Mat<QI>> basis = [] {
        // Column u = 7a+b holds the derivation defect of the elementary matrix E_ab.
        Mat<QI> cons(21 * 7, 49);
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b) {
                Mat<QI> D(7, 7);
                D(a, b) = QI(1);
                auto apply = [&](const Vec7<QI>& v) { return Vec7<QI>::from(D.apply(v.vec())); };
                int row = 0;
                for (int i = 0; i < 7; ++i)
                    for (int j = i + 1; j < 7; ++j) {
                        auto ei = Vec7<QI>::basis(i), ej = Vec7<QI>::basis(j);
                        auto r = apply(cross(ei, ej)) - cross(apply(ei), ej) - cross(ei, apply(ej));
                        for (int k = 0; k < 7; ++k) cons(row + k, 7 * a + b) = r[k];
                        row += 7;
                    }
            }
        Mat<QI> n = nullspace(cons);
        std::vector<Mat<QI>> out;
        for (int j = 0; j < n.cols(); ++j) {
            Mat<QI> D(7, 7);
            for (int u = 0; u < 49; ++u) D(u / 7, u % 7) = n(u, j);
            out.push_back(D);
        }
        return out;
    }();
    return basis;
}

namespace {

Mat<QI> combine(const std::vector<Mat<QI>>& B, const std::vector<QI>& c) {
    Mat<QI> D(7, 7);
    for (size_t k = 0; k < B.size(); ++k)
        if (!c[k].is_zero()) D = D + c[k] * B[k];
    return D;
}

// Two commuting derivations killing e₁ and preserving the planes (e₂,e₃), (e₄,e₅), (e₆,e₇).
std::vector<Mat<QI>> cartan_pair() {
    const auto& B = g2_basis();
    const int n = int(B.size());
    const int plane_of[7] = {-1, 0, 0, 1, 1, 2, 2};
    Mat<QI> cons(0, n);
    for (int col = 0; col < 7; ++col)
        for (int row = 0; row < 7; ++row) {
            bool keep = col == 0 || plane_of[row] != plane_of[col] || row == 0;
            if (!keep) continue;
            Mat<QI> r(1, n);
            for (int k = 0; k < n; ++k) r(0, k) = B[k](row, col);
            cons = cons.vcat(r);
        }
    Mat<QI> ns = nullspace(cons);
    if (ns.cols() != 2) throw std::logic_error("cartan_pair: expected a 2-dimensional torus");
    std::vector<Mat<QI>> out;
    for (int j = 0; j < 2; ++j) out.push_back(combine(B, ns.col(j)));
    return out;
}

}  // namespace

const std::map<Weight, Vec7<QI>>& exact_weight_vectors() {
    static const std::map<Weight, Vec7<QI>> table = [] {
        auto H = cartan_pair();
        const QI I = QI::unit_i();
        const auto e1 = Vec7<QI>::basis(0);
        std::array<Vec7<QI>, 3> u;
        std::array<std::array<mpq_class, 2>, 3> w;
        for (int p = 0; p < 3; ++p) {
            auto ea = Vec7<QI>::basis(1 + 2 * p);
            u[p] = ea - I * cross(e1, ea);
            for (int h = 0; h < 2; ++h) {
                auto Hu = Vec7<QI>::from(H[h].apply(u[p].vec()));
                QI mu = Hu[1 + 2 * p] / u[p][1 + 2 * p];
                if (!(Hu - mu * u[p]).is_zero()) throw std::logic_error("weight vector is not an eigenvector");
                if (sgn(mu.re) != 0) throw std::logic_error("torus eigenvalue is not imaginary");
                w[p][h] = mu.im;
            }
        }
        // α₁ = wt(u₀), α₂ = wt(u₁) − wt(u₀); then wt(u₂) must be −(2α₁+α₂).
        for (int h = 0; h < 2; ++h)
            if (w[0][h] + w[1][h] + w[2][h] != 0) throw std::logic_error("T^{1,0} weights do not sum to zero");
        mpq_class det = w[0][0] * (w[1][1] - w[0][1]) - w[0][1] * (w[1][0] - w[0][0]);
        if (sgn(det) == 0) throw std::logic_error("simple weights are dependent");
        std::map<Weight, Vec7<QI>> t;
        t[Weight{0, 0}] = e1;
        t[Weight{1, 0}] = u[0];
        t[Weight{1, 1}] = u[1];
        t[Weight{-2, -1}] = u[2];
        t[Weight{-1, 0}] = u[0].conj();
        t[Weight{-1, -1}] = u[1].conj();
        t[Weight{2, 1}] = u[2].conj();
        return t;
    }();
    return table;
}

const Mat<QI>& root_vector(const Weight& alpha) {
    static const std::map<Weight, Mat<QI>> table = [] {
        const auto& B = g2_basis();
        const auto& wv = exact_weight_vectors();
        const int n = int(B.size());
        std::map<Weight, Mat<QI>> t;
        for (const auto& al : roots()) {
            // (D u_λ, ū_ν) = 0 for every ν ≠ λ+α.
            Mat<QI> cons(0, n);
            for (auto& [lam, ul] : wv)
                for (auto& [nu, un] : wv) {
                    if (nu == lam + al) continue;
                    Mat<QI> r(1, n);
                    for (int k = 0; k < n; ++k) r(0, k) = herm(Vec7<QI>::from(B[k].apply(ul.vec())), un);
                    cons = cons.vcat(r);
                }
            Mat<QI> ns = nullspace(cons);
            if (ns.cols() != 1) throw std::logic_error("root space is not one-dimensional");
            t[al] = combine(B, ns.col(0));
        }
        return t;
    }();
    auto it = table.find(alpha);
    if (it == table.end()) throw PreconditionError("root_vector: not a root");
    return it->second;
}

}  // namespace g2t

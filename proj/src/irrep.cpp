#include "kzu/irrep.hpp"

#include <stdexcept>

namespace kzu {

int Irrep::space_index(const std::vector<int>& depth) const {
    auto it = index_.find(depth);
    return it == index_.end() ? -1 : it->second;
}

void Irrep::rescale_root_vector(int delta, const Rational& s) {
    if (sgn(s) == 0) throw std::invalid_argument("root vector rescaling must be nonzero");
    f_root_.at(delta) = f_root_.at(delta) * s;
    e_root_.at(delta) = e_root_.at(delta) * Rational(1 / s);
}

Irrep build_irrep(const RootSystem& rs, const Weight& lambda, int max_dim) {
    if (static_cast<int>(lambda.coords.size()) != rs.rank())
        throw std::invalid_argument("weight has wrong number of Dynkin labels");
    if (!lambda.is_dominant_integral()) throw std::invalid_argument("highest weight must be dominant integral");
    const Rational wd = weyl_dimension(rs, lambda);
    if (wd > max_dim)
        throw std::length_error("irrep dimension " + to_string(wd) + " exceeds cap " + std::to_string(max_dim));

    ModuleOptions opt;
    opt.max_dim = max_dim;
    HighestWeightModule m(rs.cartan(), lambda.coords, opt);

    Irrep v;
    v.rs_ = &rs;
    v.lambda_ = lambda;
    v.dim_ = m.dim();
    v.spaces_ = m.spaces();
    for (std::size_t s = 0; s < v.spaces_.size(); ++s) v.index_[v.spaces_[s].depth] = static_cast<int>(s);
    v.space_of_ = m.space_of();
    for (int i = 0; i < rs.rank(); ++i) {
        v.e_.push_back(m.e(i));
        v.f_.push_back(m.f(i));
        v.h_.push_back(m.h(i));
    }
    for (const auto& delta : rs.positive_roots()) {
        auto dec = decompose_positive_root(rs, delta);
        SparseOp f = v.f_[dec.witness[0]];
        SparseOp e = v.e_[dec.witness[0]];
        for (std::size_t a = 1; a < dec.witness.size(); ++a) {
            f = commutator(v.f_[dec.witness[a]], f);
            e = commutator(v.e_[dec.witness[a]], e);
        }
        v.f_root_.push_back(std::move(f));
        v.e_root_.push_back(std::move(e));
    }
    return v;
}

Rational weyl_dimension(const RootSystem& rs, const Weight& lambda) {
    const RatVector rho = rs.rho().coords;
    Weight shifted{lambda.coords};
    for (int i = 0; i < rs.rank(); ++i) shifted.coords[i] += rho[i];
    Rational num = 1, den = 1;
    for (const auto& a : rs.positive_roots()) {
        num *= rs.inner(shifted, a);
        den *= rs.inner(rs.rho(), a);
    }
    return num / den;
}

Rational casimir_eigenvalue(const RootSystem& rs, const Weight& lambda) {
    Weight shifted{lambda.coords};
    for (int i = 0; i < rs.rank(); ++i) shifted.coords[i] += 2;
    return rs.inner(lambda, shifted);
}

namespace {

Rational trace(const SparseOp& m) {
    Rational t = 0;
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c))
            if (r == c) t += v;
    return t;
}

}  // namespace

Rational invariant_form(const RootSystem& rs, const SparseOp& ad_x, const SparseOp& ad_y) {
    return trace(ad_x * ad_y) / Rational(2 * rs.dual_coxeter());
}

LieStructure lie_structure(const RootSystem& rs) {
    const Root& theta = rs.highest_root();
    Irrep ad = build_irrep(rs, rs.root_to_weight(theta.coords), 100000);
    const int r = rs.rank();
    const auto& pos = rs.positive_roots();

    LieStructure out;
    out.cartan_form = RatMatrix(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out.cartan_form(i, j) = invariant_form(rs, ad.h(i), ad.h(j));
    out.cartan_form_inverse = inverse(out.cartan_form);
    for (std::size_t d = 0; d < pos.size(); ++d)
        out.root_norm.push_back(invariant_form(rs, ad.e_root(d), ad.f_root(d)));

    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = 0; b < pos.size(); ++b) {
            std::vector<int> sum(r);
            for (int i = 0; i < r; ++i) sum[i] = pos[a].coords[i] + pos[b].coords[i];
            int c = rs.root_index(Root{sum});
            if (c < 0) continue;
            Rational s;
            if (!proportional(commutator(ad.f_root(a), ad.f_root(b)), ad.f_root(c), s))
                throw std::logic_error("root vector bracket not proportional to a root vector");
            out.f_bracket[{static_cast<int>(a), static_cast<int>(b)}] = s;
            if (!proportional(commutator(ad.e_root(a), ad.e_root(b)), ad.e_root(c), s))
                throw std::logic_error("root vector bracket not proportional to a root vector");
            out.e_bracket[{static_cast<int>(a), static_cast<int>(b)}] = s;
        }
    return out;
}

SparseOp casimir_operator(const Irrep& v, const LieStructure& lie) {
    const int r = v.root_system().rank();
    SparseOp c(v.dim(), v.dim());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) c = c + v.h(i) * v.h(j) * lie.cartan_form_inverse(i, j);
    for (std::size_t d = 0; d < lie.root_norm.size(); ++d) {
        const auto& e = v.e_root(d);
        const auto& f = v.f_root(d);
        c = c + (e * f + f * e) * Rational(1 / lie.root_norm[d]);
    }
    return c;
}

}  // namespace kzu

#include "kzu/affine.hpp"

#include <functional>
#include <stdexcept>

namespace kzu {

// Simple roots alpha_0 = delta - alpha and alpha_1 = alpha. The Chevalley generators are
// e_1 = e(0), f_1 = f(0), e_0 = f(1), f_0 = e(-1); depth along alpha_0 is the degree.
AffineSl2Module::AffineSl2Module(int level, int label, int max_degree)
    : level_(level), label_(label), max_degree_(max_degree) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    if (label < 0 || label > level) throw std::invalid_argument("sl2 weight outside P_k");
    if (max_degree < 0) throw std::invalid_argument("negative truncation degree");

    ModuleOptions opt;
    opt.keep = [max_degree](const std::vector<int>& n) { return n[0] <= max_degree; };
    opt.max_dim = 200000;
    module_ = std::make_unique<HighestWeightModule>(std::vector<std::vector<int>>{{2, -2}, {-2, 2}},
                                                    std::vector<Rational>{level - label, label}, opt);

    const auto& m = *module_;
    const Rational half(1, 2);
    // h(-1) = [e(-1), f(0)], f(-n-1) = -1/2 [h(-1), f(-n)]
    SparseOp h_minus = commutator(m.f(0), m.f(1));
    f_neg_.push_back(m.f(1));
    for (int n = 1; n <= max_degree; ++n) f_neg_.push_back(commutator(h_minus, f_neg_.back()) * Rational(-half));
    // h(1) = [e(0), f(1)], f(n+1) = -1/2 [h(1), f(n)]
    SparseOp h_plus = commutator(m.e(1), m.e(0));
    f_pos_.push_back(m.f(1));
    f_pos_.push_back(m.e(0));
    for (int n = 2; n <= max_degree + 1; ++n) f_pos_.push_back(commutator(h_plus, f_pos_.back()) * Rational(-half));
}

std::vector<int> AffineSl2Module::degree_dimensions() const {
    std::vector<int> d(max_degree_ + 1, 0);
    for (const auto& ws : module_->spaces()) d[ws.depth[0]] += ws.dim;
    return d;
}

const SparseOp& AffineSl2Module::f_mode(int n) const {
    if (n <= 0) {
        if (-n >= static_cast<int>(f_neg_.size())) throw std::out_of_range("mode beyond truncation");
        return f_neg_[-n];
    }
    if (n >= static_cast<int>(f_pos_.size())) throw std::out_of_range("mode beyond truncation");
    return f_pos_[n];
}

int AffineSl2Module::degree_of(int basis_index) const {
    return module_->spaces()[module_->space_of()[basis_index]].depth[0];
}

AffineBoundReport affine_bound_check(int level, int label, const std::vector<std::vector<int>>& words,
                                     int max_degree) {
    if (max_degree > 6) throw std::invalid_argument("truncation degree above 6 is out of scope");
    AffineBoundReport rep;
    rep.level = level;
    rep.label = label;
    rep.max_degree = max_degree;
    for (const auto& w : words) {
        if (w.size() > 3) throw std::invalid_argument("words longer than 3 are out of scope");
        for (int b : w)
            if (b > 4 || b < -4) throw std::invalid_argument("mode index outside [-4, 4]");
    }
    AffineSl2Module mod(level, label, max_degree);

    for (const auto& w : words) {
        AffineWordRecord rec;
        rec.modes = w;
        const int L = static_cast<int>(w.size());
        // (lambda, gamma) = L j, (gamma, gamma) = 2 L^2 with (alpha, alpha) = 2 and lambda = j omega
        rec.bound = Rational(2 * L * label - 2 * L * L, 2 * level);
        rec.bound.canonicalize();
        for (int b : w) rec.lhs += b;

        // apply f(b_L) first; a negative partial degree means the vector is zero
        RatVector v(mod.dim());
        v[0] = 1;
        int degree = 0;
        bool zero = false;
        for (int a = L - 1; a >= 0 && !zero; --a) {
            degree -= w[a];
            if (degree < 0) {
                zero = true;
                break;
            }
            if (degree > max_degree) throw std::invalid_argument("word leaves the truncated module");
            v = mod.f_mode(w[a]).apply(v);
            zero = true;
            for (const auto& x : v)
                if (sgn(x) != 0) zero = false;
        }
        rec.nonzero = !zero;
        rec.pass = !rec.nonzero || rec.lhs <= rec.bound;
        if (rec.nonzero) ++rep.nonzero_words;
        if (!rec.pass) ++rep.counterexamples;
        rep.records.push_back(std::move(rec));
    }
    rep.pass = rep.counterexamples == 0;
    return rep;
}

std::vector<std::vector<int>> admissible_words(int max_length, int max_mode, int max_degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    // build from the right: the rightmost mode acts first
    std::function<void(int, int)> rec = [&](int remaining, int degree) {
        if (!word.empty()) out.emplace_back(word.rbegin(), word.rend());
        if (remaining == 0) return;
        for (int b = -max_mode; b <= max_mode; ++b) {
            const int d = degree - b;
            if (d < 0 || d > max_degree) continue;
            word.push_back(b);
            rec(remaining - 1, d);
            word.pop_back();
        }
    };
    rec(max_length, 0);
    return out;
}

}  // namespace kzu

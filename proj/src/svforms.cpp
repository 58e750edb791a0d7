#include "kzu/svforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace kzu {

namespace {

std::vector<int> mu_root_coords(const RootSystem& rs, const std::vector<Weight>& weights) {
    Weight mu = rs.zero_weight();
    for (const auto& w : weights)
        for (int i = 0; i < rs.rank(); ++i) mu.coords[i] += w.coords[i];
    std::vector<int> n;
    for (const auto& c : rs.weight_to_root_coords(mu)) {
        if (!is_integer(c) || sgn(c) < 0) throw std::invalid_argument("sum of weights is not in the root lattice");
        n.push_back(static_cast<int>(c.get_num().get_si()));
    }
    return n;
}

/// Canonical factor for x_p - x_q; flips sign when p > q.
LinearFactor canonical(int p, int q, int& sign) {
    if (p == q) throw std::logic_error("degenerate linear factor");
    if (p < q) return {p, q};
    sign = -sign;
    return {q, p};
}

void add_state(TensorState& acc, const TensorState& v, const Rational& s) {
    for (const auto& [idx, x] : v) {
        auto& slot = acc[idx];
        slot += s * x;
        if (sgn(slot) == 0) acc.erase(idx);
    }
}

std::vector<FormTerm> collect(std::map<std::vector<LinearFactor>, TensorState>& acc) {
    std::vector<FormTerm> out;
    for (auto& [f, v] : acc)
        if (!v.empty()) out.push_back({f, std::move(v)});
    return out;
}

}  // namespace

BetaMap default_beta(const RootSystem& rs, const std::vector<Weight>& weights) {
    auto n = mu_root_coords(rs, weights);
    std::vector<int> roots;
    for (int p = 0; p < rs.rank(); ++p)
        for (int c = 0; c < n[p]; ++c) roots.push_back(rs.root_index(rs.simple_root(p)));
    return make_beta(rs, weights, roots);
}

BetaMap make_beta(const RootSystem& rs, const std::vector<Weight>& weights, std::vector<int> roots) {
    BetaMap b;
    b.n = mu_root_coords(rs, weights);
    b.M = static_cast<int>(roots.size());
    std::vector<int> sum(rs.rank(), 0);
    bool simple = true;
    for (int r : roots) {
        if (r < 0 || r >= static_cast<int>(rs.positive_roots().size())) throw std::invalid_argument("beta value is not a positive root");
        const auto& c = rs.positive_roots()[r].coords;
        if (rs.positive_roots()[r].height() != 1) simple = false;
        for (int i = 0; i < rs.rank(); ++i) sum[i] += c[i];
    }
    b.beta = std::move(roots);
    b.is_simple_case = simple && sum == b.n;
    return b;
}

MasterFunction::MasterFunction(const RootSystem& rs, const std::vector<Weight>& weights, const BetaMap& beta, int level)
    : M_(beta.M), N_(static_cast<int>(weights.size())), kappa_(level + rs.dual_coxeter()) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    const auto& pos = rs.positive_roots();
    for (int p = 0; p < M_ + N_; ++p)
        for (int q = p + 1; q < M_ + N_; ++q) {
            Rational e;
            if (p < M_ && q < M_) {
                e = -rs.inner(pos[beta.beta[p]], pos[beta.beta[q]]) / kappa_;
            } else if (p < M_) {
                e = rs.inner(weights[q - M_], pos[beta.beta[p]]) / kappa_;
            } else {
                e = -rs.inner(weights[p - M_], weights[q - M_]) / kappa_;
            }
            table_.push_back({{p, q}, e});
        }
}

Rational MasterFunction::exponent(int p, int q) const {
    if (p > q) std::swap(p, q);
    for (const auto& e : table_)
        if (e.factor.p == p && e.factor.q == q) return e.exponent;
    throw std::out_of_range("no such master function factor");
}

Complex MasterFunction::eval(const std::vector<Complex>& x) const {
    Complex s = 0;
    for (const auto& e : table_) {
        if (sgn(e.exponent) == 0) continue;
        Complex d = x[e.factor.p] - x[e.factor.q];
        if (d == Complex(0)) throw std::domain_error("singular configuration");
        s += to_double(e.exponent) * std::log(d);
    }
    return std::exp(s);
}

double MasterFunction::log_modulus(const std::vector<Complex>& x) const {
    double s = 0;
    for (const auto& e : table_) {
        if (sgn(e.exponent) == 0) continue;
        double d = std::abs(x[e.factor.p] - x[e.factor.q]);
        if (d == 0) throw std::domain_error("singular configuration");
        s += to_double(e.exponent) * std::log(d);
    }
    return s;
}

BranchTracker::BranchTracker(const MasterFunction& mf, const std::vector<Complex>& start) : mf_(&mf) {
    for (const auto& e : mf.exponents()) logs_.push_back(std::log(start[e.factor.p] - start[e.factor.q]));
}

void BranchTracker::advance(const std::vector<Complex>& x) {
    const double two_pi = 2 * std::numbers::pi;
    const auto& table = mf_->exponents();
    for (std::size_t k = 0; k < table.size(); ++k) {
        Complex d = x[table[k].factor.p] - x[table[k].factor.q];
        if (d == Complex(0)) throw std::domain_error("singular configuration");
        Complex l = std::log(d);
        double turns = std::round((logs_[k].imag() - l.imag()) / two_pi);
        logs_[k] = Complex(l.real(), l.imag() + turns * two_pi);
    }
}

Complex BranchTracker::log_value() const {
    Complex s = 0;
    const auto& table = mf_->exponents();
    for (std::size_t k = 0; k < table.size(); ++k) s += to_double(table[k].exponent) * logs_[k];
    return s;
}

Complex BranchTracker::value() const { return std::exp(log_value()); }

std::vector<FormTerm> closed_formula_terms(const TensorProduct& tp, const BetaMap& beta) {
    const int M = beta.M;
    const int N = tp.size();
    std::map<std::vector<LinearFactor>, TensorState> acc;
    std::vector<int> assign(M, 0);

    // each part contributes (factors, sign, vector in its factor)
    struct PartTerm {
        std::vector<LinearFactor> factors;
        int sign;
        RatVector vec;
    };
    auto part_terms = [&](int i, std::vector<int> part) {
        std::vector<PartTerm> out;
        const Irrep& v = tp.factor(i);
        std::sort(part.begin(), part.end());
        do {
            PartTerm pt{{}, 1, RatVector(v.dim())};
            const int q = static_cast<int>(part.size());
            for (int s = 0; s + 1 < q; ++s) pt.factors.push_back(canonical(part[s], part[s + 1], pt.sign));
            if (q > 0) pt.factors.push_back(canonical(part[q - 1], M + i, pt.sign));
            pt.vec[0] = 1;
            for (int s = q - 1; s >= 0; --s) pt.vec = v.f_root(beta.beta[part[s]]).apply(pt.vec);
            out.push_back(std::move(pt));
        } while (std::next_permutation(part.begin(), part.end()));
        return out;
    };

    std::function<void(int)> rec = [&](int a) {
        if (a < M) {
            for (int i = 0; i < N; ++i) {
                assign[a] = i;
                rec(a + 1);
            }
            return;
        }
        // product over parts of the sums over orderings
        std::vector<std::vector<PartTerm>> per_part(N);
        for (int i = 0; i < N; ++i) {
            std::vector<int> part;
            for (int b = 0; b < M; ++b)
                if (assign[b] == i) part.push_back(b);
            per_part[i] = part_terms(i, part);
        }
        std::vector<int> choice(N, 0);
        while (true) {
            std::vector<LinearFactor> factors;
            int sign = 1;
            TensorState state{{0, Rational(1)}};
            for (int i = 0; i < N && !state.empty(); ++i) {
                const auto& pt = per_part[i][choice[i]];
                sign *= pt.sign;
                factors.insert(factors.end(), pt.factors.begin(), pt.factors.end());
                TensorState next;
                for (const auto& [idx, x] : state)
                    for (int r = 0; r < tp.factor(i).dim(); ++r)
                        if (sgn(pt.vec[r]) != 0) next[tp.with_digit(idx, i, r)] = x * pt.vec[r];
                state = std::move(next);
            }
            if (!state.empty()) {
                std::sort(factors.begin(), factors.end());
                add_state(acc[factors], state, Rational(sign));
            }
            int i = 0;
            while (i < N && ++choice[i] == static_cast<int>(per_part[i].size())) choice[i++] = 0;
            if (i == N) break;
        }
    };
    rec(0);
    return collect(acc);
}

std::vector<FormTerm> gauge_reduction_terms(const TensorProduct& tp, const BetaMap& beta) {
    const int M = beta.M;
    const int N = tp.size();
    using LieElem = std::vector<SparseOp>;  // one matrix per tensor factor
    struct Insertion {
        LieElem x;
        int var;
    };
    std::vector<Insertion> start;
    for (int a = 0; a < M; ++a) {
        LieElem x;
        for (int j = 0; j < N; ++j) x.push_back(tp.factor(j).f_root(beta.beta[a]));
        start.push_back({std::move(x), a});
    }
    std::map<std::vector<LinearFactor>, TensorState> acc;

    std::function<void(const std::vector<Insertion>&, const TensorState&, std::vector<LinearFactor>&, int)> rec =
        [&](const std::vector<Insertion>& ins, const TensorState& state, std::vector<LinearFactor>& factors, int sign) {
            if (state.empty()) return;
            if (ins.empty()) {
                auto key = factors;
                std::sort(key.begin(), key.end());
                add_state(acc[key], state, Rational(sign));
                return;
            }
            const Insertion& last = ins.back();
            std::vector<Insertion> rest(ins.begin(), ins.end() - 1);
            // 1/(t_m - z_j) <Psi| ... | rho_j(X_m) v>
            for (int j = 0; j < N; ++j) {
                int s = sign;
                factors.push_back(canonical(last.var, M + j, s));
                rec(rest, tp.apply(last.x[j], j, state), factors, s);
                factors.pop_back();
            }
            // 1/(t_m - t_b) <Psi| [X_m, X_b](t_b) ... | v>
            for (std::size_t b = 0; b < rest.size(); ++b) {
                LieElem br;
                bool zero = true;
                for (int j = 0; j < N; ++j) {
                    br.push_back(commutator(last.x[j], rest[b].x[j]));
                    if (!br.back().is_zero()) zero = false;
                }
                if (zero) continue;
                auto next = rest;
                next[b].x = std::move(br);
                int s = sign;
                factors.push_back(canonical(last.var, rest[b].var, s));
                rec(next, state, factors, s);
                factors.pop_back();
            }
        };
    std::vector<LinearFactor> factors;
    rec(start, TensorState{{0, Rational(1)}}, factors, 1);
    return collect(acc);
}

ScalarForm pair_terms(const std::vector<FormTerm>& terms, const TensorProduct& tp,
                      const std::vector<InvariantFunctional>& phis, int M) {
    ScalarForm g;
    g.M = M;
    g.N = tp.size();
    for (const auto& t : terms) {
        RatVector c(phis.size());
        bool any = false;
        for (std::size_t b = 0; b < phis.size(); ++b) {
            c[b] = phis[b].pair(tp, t.vec);
            if (sgn(c[b]) != 0) any = true;
        }
        if (!any) continue;
        g.factors.push_back(t.factors);
        g.coeffs.push_back(std::move(c));
    }
    if (g.coeffs.empty() && !phis.empty()) {
        // keep the functional count visible for an identically zero form
        g.factors.push_back({});
        g.coeffs.push_back(RatVector(phis.size()));
    }
    return g;
}

RatVector evaluate_exact(const ScalarForm& g, const std::vector<Rational>& x) {
    RatVector out(g.count());
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
        Rational den = 1;
        for (const auto& f : g.factors[k]) den *= x[f.p] - x[f.q];
        if (sgn(den) == 0) throw std::domain_error("singular configuration");
        for (int b = 0; b < g.count(); ++b) out[b] += g.coeffs[k][b] / den;
    }
    return out;
}

std::vector<Complex> evaluate(const ScalarForm& g, const std::vector<Complex>& x) {
    std::vector<Complex> out(g.count());
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
        Complex den = 1;
        for (const auto& f : g.factors[k]) den *= x[f.p] - x[f.q];
        const Complex inv = 1.0 / den;
        for (int b = 0; b < g.count(); ++b) out[b] += to_double(g.coeffs[k][b]) * inv;
    }
    return out;
}

std::vector<LinearFactor> divisor_factors(int M, int N) {
    std::vector<LinearFactor> d;
    for (int a = 0; a < M; ++a)
        for (int b = a + 1; b < M + N; ++b) d.push_back({a, b});
    return d;
}

MPoly numerator(const ScalarForm& g, int b) {
    const int nv = g.M + g.N;
    const auto D = divisor_factors(g.M, g.N);
    MPoly out(nv);
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
        if (sgn(g.coeffs[k][b]) == 0) continue;
        MPoly p = MPoly::constant(nv, g.coeffs[k][b]);
        for (const auto& f : D)
            if (!std::binary_search(g.factors[k].begin(), g.factors[k].end(), f)) p = p.times_difference(f.p, f.q);
        out = out + p;
    }
    return out;
}

PoleReport pole_report(const ScalarForm& g, int b, const RootSystem& rs, const BetaMap& beta) {
    PoleReport rep;
    const MPoly num = numerator(g, b);
    const auto D = divisor_factors(g.M, g.N);
    for (const auto& f : D) {
        const int order = num.identify(f.p, f.q).is_zero() ? 0 : 1;
        rep.orders.push_back(order);
        if (f.q < g.M) {
            std::vector<int> sum(rs.rank());
            for (int i = 0; i < rs.rank(); ++i)
                sum[i] = rs.positive_roots()[beta.beta[f.p]].coords[i] + rs.positive_roots()[beta.beta[f.q]].coords[i];
            if (!rs.is_positive_root(sum) && order != 0) rep.non_root_diagonals_regular = false;
        }
    }
    // every term has distinct linear factors, so D is squarefree over all terms
    for (std::size_t k = 0; k < g.factors.size(); ++k)
        for (std::size_t s = 1; s < g.factors[k].size(); ++s)
            if (g.factors[k][s] == g.factors[k][s - 1]) rep.simple_poles = false;
    for (int a = 0; a < g.M; ++a) {
        const int dn = num.degree_in(a);
        const int dd = (g.M - 1) + g.N;
        const int deg = dn < 0 ? std::numeric_limits<int>::min() / 2 : dn - dd;
        rep.degree_at_infinity.push_back(deg);
        if (deg > -2) rep.regular_at_infinity = false;
    }
    rep.pass = rep.simple_poles && rep.regular_at_infinity && rep.non_root_diagonals_regular;
    return rep;
}

const char* stratum_name(StratumKind k) {
    switch (k) {
        case StratumKind::S1: return "S1";
        case StratumKind::S2: return "S2";
        case StratumKind::S3: return "S3";
    }
    return "?";
}

std::string StratumSpec::target_name() const {
    switch (kind) {
        case StratumKind::S1: return "moving";
        case StratumKind::S2: return "z" + std::to_string(target + 1);
        case StratumKind::S3: return "infinity";
    }
    return "?";
}

std::vector<StratumSpec> all_strata(int M, int N) {
    std::vector<StratumSpec> out;
    for (unsigned mask = 1; mask < (1u << M); ++mask) {
        std::vector<int> subset;
        for (int a = 0; a < M; ++a)
            if (mask & (1u << a)) subset.push_back(a);
        if (subset.size() >= 2) out.push_back({StratumKind::S1, subset, -1});
        for (int i = 0; i < N; ++i) out.push_back({StratumKind::S2, subset, i});
        out.push_back({StratumKind::S3, subset, -1});
    }
    return out;
}

Rational random_rational(std::mt19937_64& rng, int lo, int hi, int den) {
    std::uniform_int_distribution<long> dist(static_cast<long>(lo) * den, static_cast<long>(hi) * den);
    return ratio(dist(rng), den);
}

namespace {

struct ChartOrders {
    int order = 0;
    bool vanishes = false;
    Rational master;
};

ChartOrders expand_chart(const ScalarForm& g, int b, const MasterFunction& mf, const StratumSpec& spec,
                         const std::vector<Rational>& z, std::mt19937_64& rng) {
    const int M = g.M;
    const int N = g.N;
    std::vector<Laurent> x(M + N);
    std::vector<Rational> used(z.begin(), z.end());
    auto fresh = [&]() {
        while (true) {
            Rational r = random_rational(rng, -20, 20);
            if (std::find(used.begin(), used.end(), r) == used.end()) {
                used.push_back(r);
                return r;
            }
        }
    };
    for (int i = 0; i < N; ++i) x[M + i] = Laurent::constant(z[i]);
    std::vector<bool> moving(M, false);
    for (int a : spec.subset) moving[a] = true;
    for (int a = 0; a < M; ++a)
        if (!moving[a]) x[a] = Laurent::constant(fresh());
    const Rational base = spec.kind == StratumKind::S1 ? fresh() : (spec.kind == StratumKind::S2 ? z[spec.target] : Rational(0));
    int jac_order = 0;
    std::vector<Rational> dirs;
    for (int a : spec.subset) {
        Rational c;
        do {
            c = random_rational(rng, -5, 5, 31);
        } while (sgn(c) == 0 || std::find(dirs.begin(), dirs.end(), c) != dirs.end());
        dirs.push_back(c);
        if (spec.kind == StratumKind::S3) {
            x[a] = Laurent::monomial(1 / c, -1);
            jac_order -= 2;  // dt = -du/u^2 with u = c s
        } else {
            x[a] = Laurent::constant(base) + Laurent::monomial(c, 1);
        }
    }

    const auto D = divisor_factors(M, N);
    std::map<LinearFactor, Laurent> diff;
    for (const auto& f : D) diff[f] = x[f.p] - x[f.q];
    Laurent den = Laurent::constant(1);
    for (const auto& f : D) den = den * diff[f];
    Laurent num;
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
        if (sgn(g.coeffs[k][b]) == 0) continue;
        Laurent p = Laurent::constant(g.coeffs[k][b]);
        for (const auto& f : D)
            if (!std::binary_search(g.factors[k].begin(), g.factors[k].end(), f)) p = p * diff[f];
        num = num + p;
    }
    ChartOrders out;
    if (num.is_zero()) {
        out.vanishes = true;
        return out;
    }
    out.order = num.order() - den.order() + jac_order;
    for (const auto& e : mf.exponents()) {
        if (sgn(e.exponent) == 0) continue;
        Laurent d = x[e.factor.p] - x[e.factor.q];
        out.master += e.exponent * d.order();
    }
    return out;
}

}  // namespace

StratumResult stratum_log_degree(const ScalarForm& g, int b, const MasterFunction& mf, const StratumSpec& spec,
                                 const std::vector<Rational>& z, std::mt19937_64& rng, int samples) {
    if (spec.subset.empty()) throw std::invalid_argument("stratum needs at least one colliding point");
    if (spec.kind == StratumKind::S1 && spec.L() < 2) throw std::invalid_argument("S1 needs at least two points");
    if (spec.kind == StratumKind::S2 && (spec.target < 0 || spec.target >= g.N))
        throw std::invalid_argument("S2 target out of range");
    StratumResult res;
    res.spec = spec;
    res.codim = spec.kind == StratumKind::S1 ? spec.L() - 1 : spec.L();

    std::vector<ChartOrders> runs;
    int best = std::numeric_limits<int>::max();
    int agree = 0;
    for (int attempt = 0; attempt < 4 * samples && agree < samples; ++attempt) {
        auto r = expand_chart(g, b, mf, spec, z, rng);
        if (r.vanishes) {
            runs.push_back(r);
            if (runs.size() >= static_cast<std::size_t>(samples) &&
                std::all_of(runs.begin(), runs.end(), [](const ChartOrders& c) { return c.vanishes; }))
                break;
            continue;
        }
        if (r.order < best) {
            best = r.order;
            agree = 0;
            res.master_term = r.master;
        }
        if (r.order == best) ++agree;
        runs.push_back(r);
    }
    if (best == std::numeric_limits<int>::max()) {
        res.form_vanishes = true;
        res.generic_agreement = true;
        res.pass = false;
        return res;
    }
    res.generic_agreement = agree >= samples;
    if (!res.generic_agreement) throw std::runtime_error("generic directions did not agree on the leading order");
    res.order = best;
    res.d_omega = Rational(res.codim + best);
    res.d_romega = res.d_omega + res.master_term;
    res.pass = sgn(res.d_romega) > 0 && sgn(res.d_omega) >= 0;
    return res;
}

InjectivityReport injectivity_rank(const ScalarForm& g, const std::vector<Rational>& z, std::mt19937_64& rng,
                                   int extra_samples) {
    InjectivityReport rep;
    const int n = g.count();
    if (n == 0) {
        rep.pass = true;
        rep.gap = std::numeric_limits<double>::infinity();
        return rep;
    }
    const int samples = n + extra_samples;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd A(samples, n);
    RatMatrix exact(samples, n);
    for (int s = 0; s < samples; ++s) {
        std::vector<Complex> x(g.M + g.N);
        std::vector<Rational> xr(g.M + g.N);
        for (int i = 0; i < g.N; ++i) {
            x[g.M + i] = to_double(z[i]);
            xr[g.M + i] = z[i];
        }
        for (int a = 0; a < g.M; ++a) {
            x[a] = Complex(gauss(rng) * 2, std::abs(gauss(rng)) + 0.1);
            xr[a] = random_rational(rng, -10, 10, 1009);
        }
        auto v = evaluate(g, x);
        auto w = evaluate_exact(g, xr);
        for (int b = 0; b < n; ++b) {
            A(s, b) = v[b];
            exact(s, b) = w[b];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    auto sv = svd.singularValues();
    for (int i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv[i]);
    // rank at the largest relative gap
    const double smax = sv.size() ? sv[0] : 0.0;
    rep.rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > smax * 1e-12) rep.rank = i + 1;
    if (rep.rank == sv.size())
        rep.gap = std::numeric_limits<double>::infinity();
    else
        rep.gap = sv[rep.rank] > 0 ? sv[rep.rank - 1] / sv[rep.rank] : std::numeric_limits<double>::infinity();
    rep.exact_rank = static_cast<int>(rank(exact));
    rep.pass = rep.rank == n && rep.exact_rank == n && rep.gap >= 1e6;
    return rep;
}

}  // namespace kzu

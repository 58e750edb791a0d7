#include "kzu/suite.hpp"

#include "kzu/affine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kzu {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// JSON has no infinities.
Json num(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json rat(const Rational& q) { return to_string(q); }

CheckStatus verdict(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

CheckRecord record(const std::string& instance, std::string check, Json value, Json tol, bool ok) {
    return {instance, std::move(check), std::move(value), std::move(tol), verdict(ok), true};
}

CheckRecord note(const std::string& instance, std::string check, Json value) {
    return {instance, std::move(check), std::move(value), nullptr, CheckStatus::Pass, false};
}

CheckRecord from_value(const std::string& instance, const CheckValue& v) {
    return {instance, v.check, Json{{"value", num(v.value)}, {"uncertainty", num(v.uncertainty)}}, num(v.tolerance),
            v.status, true};
}

std::string labels_text(const std::vector<std::vector<int>>& labels) {
    std::ostringstream os;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < labels[i].size(); ++j) os << (j ? "," : "") << labels[i][j];
    }
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Rational> random_points(std::mt19937_64& rng, int n) {
    std::vector<Rational> z;
    while (static_cast<int>(z.size()) < n) {
        Rational q = random_rational(rng, -10, 10);
        if (std::find(z.begin(), z.end(), q) == z.end()) z.push_back(q);
    }
    return z;
}

std::vector<Rational> integer_points(std::initializer_list<long> v) {
    std::vector<Rational> z;
    for (long x : v) z.emplace_back(x);
    return z;
}

Config shifted(const Config& z, const Config& dz, double s) {
    Config out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] + s * dz[i];
    return out;
}

}  // namespace

// ---- instance ---------------------------------------------------------------------------------

Instance::Instance(const std::string& algebra, const std::vector<std::vector<int>>& labels, int level,
                   std::vector<Rational> points)
    : level_(level), points_(std::move(points)) {
    rs_ = std::make_unique<RootSystem>(build_root_system(algebra));
    if (level < 1) throw std::invalid_argument("level must be a positive integer");
    if (labels.empty()) throw std::invalid_argument("at least one weight is required");
    if (labels.size() != points_.size())
        throw std::invalid_argument("number of points (" + std::to_string(points_.size()) +
                                    ") differs from number of weights (" + std::to_string(labels.size()) + ")");
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            if (points_[i] == points_[j]) throw std::invalid_argument("marked points must be distinct");
    for (const auto& l : labels) {
        if (static_cast<int>(l.size()) != rs_->rank())
            throw std::invalid_argument("weight has " + std::to_string(l.size()) + " labels, rank is " +
                                        std::to_string(rs_->rank()));
        Weight w{RatVector(l.begin(), l.end())};
        if (!w.is_dominant_integral()) throw std::invalid_argument("weights must be dominant integral");
        if (!rs_->in_alcove(w, level)) throw std::invalid_argument("weight " + labels_text({l}) + " is not of level <= " +
                                                                   std::to_string(level));
        weights_.push_back(std::move(w));
    }
    std::vector<const Irrep*> ptrs;
    for (const auto& w : weights_) {
        irreps_.push_back(std::make_unique<Irrep>(build_irrep(*rs_, w)));
        ptrs.push_back(irreps_.back().get());
    }
    tp_ = std::make_unique<TensorProduct>(ptrs);
    std::ostringstream os;
    os << rs_->name() << "[" << labels_text(labels) << "] k=" << level << " z=";
    for (std::size_t i = 0; i < points_.size(); ++i) os << (i ? "," : "") << to_string(points_[i]);
    name_ = os.str();
}

Config Instance::complex_points() const {
    Config z;
    for (const auto& q : points_) z.emplace_back(to_double(q), 0.0);
    return z;
}

const LieStructure& Instance::lie() const {
    if (!lie_) lie_ = std::make_unique<LieStructure>(lie_structure(*rs_));
    return *lie_;
}

const BlockSpace& Instance::blocks() const {
    if (!blocks_) blocks_ = std::make_unique<BlockSpace>(conformal_block_basis(*tp_, points_, level_));
    return *blocks_;
}

void Instance::set_blocks(BlockSpace bs) {
    if (bs.level != level_ || bs.points != points_ || bs.weights != weights_)
        throw std::invalid_argument("block space belongs to a different instance");
    const auto zero = static_cast<std::size_t>(tp_->zero_weight().size());
    for (const auto& phi : bs.invariants)
        if (phi.coeffs.size() != zero) throw std::invalid_argument("block space has the wrong zero-weight dimension");
    blocks_ = std::make_unique<BlockSpace>(std::move(bs));
    block_form_.reset();
    invariant_form_.reset();
}

const BetaMap& Instance::beta() const {
    if (!beta_) beta_ = std::make_unique<BetaMap>(default_beta(*rs_, weights_));
    return *beta_;
}

const MasterFunction& Instance::master() const {
    if (!mf_) mf_ = std::make_unique<MasterFunction>(*rs_, weights_, beta(), level_);
    return *mf_;
}

const ScalarForm& Instance::block_form() const {
    if (!closed_) closed_ = std::make_unique<std::vector<FormTerm>>(closed_formula_terms(*tp_, beta()));
    if (!block_form_) block_form_ = std::make_unique<ScalarForm>(pair_terms(*closed_, *tp_, blocks().basis, beta().M));
    return *block_form_;
}

const ScalarForm& Instance::invariant_form() const {
    if (!closed_) closed_ = std::make_unique<std::vector<FormTerm>>(closed_formula_terms(*tp_, beta()));
    if (!invariant_form_)
        invariant_form_ = std::make_unique<ScalarForm>(pair_terms(*closed_, *tp_, blocks().invariants, beta().M));
    return *invariant_form_;
}

Json Instance::describe() const {
    Json w = Json::array();
    for (const auto& x : weights_) {
        Json l = Json::array();
        for (const auto& c : x.coords) l.push_back(c.get_num().get_si());
        w.push_back(l);
    }
    Json z = Json::array();
    for (const auto& q : points_) z.push_back(rat(q));
    return {{"algebra", rs_->name()}, {"weights", w}, {"level", level_}, {"points", z}};
}

namespace {

int parse_int(const std::string& x, const std::string& context) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(x, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (x.empty() || pos != x.size()) throw std::invalid_argument("bad integer '" + x + "' in weight '" + context + "'");
    return v;
}

// One weight: "0", "(a,b,...)", or a sum of terms "n w i" such as "w", "2w", "w1+w2", "3w2".
// A bare integer is a Dynkin label, allowed for rank one only.
std::vector<int> parse_weight(const std::string& item, int rank) {
    if (item.empty()) throw std::invalid_argument("empty weight");
    std::vector<int> labels(rank, 0);
    if (item.front() == '(') {
        if (item.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + item + "'");
        const auto parts = split(item.substr(1, item.size() - 2), ',');
        if (static_cast<int>(parts.size()) != rank)
            throw std::invalid_argument("weight '" + item + "' has " + std::to_string(parts.size()) +
                                        " labels, rank is " + std::to_string(rank));
        for (int i = 0; i < rank; ++i) labels[i] = parse_int(parts[i], item);
        return labels;
    }
    if (item == "0") return labels;
    for (const auto& term : split(item, '+')) {
        const auto w = term.find('w');
        if (w == std::string::npos) {
            if (rank != 1) throw std::invalid_argument("bare label '" + term + "' needs rank one; write n*w_i as 'nwi'");
            labels[0] += parse_int(term, item);
            continue;
        }
        const std::string coef = term.substr(0, w), index = term.substr(w + 1);
        const int c = coef.empty() ? 1 : parse_int(coef, item);
        int i = 1;
        if (!index.empty()) {
            i = parse_int(index, item);
        } else if (rank != 1) {
            throw std::invalid_argument("weight '" + item + "' needs an index (w1..w" + std::to_string(rank) + ")");
        }
        if (i < 1 || i > rank) throw std::invalid_argument("fundamental weight index out of range in '" + item + "'");
        labels[i - 1] += c;
    }
    return labels;
}

}  // namespace

std::vector<std::vector<int>> parse_weight_list(const std::string& text, int rank) {
    std::vector<std::vector<int>> out;
    if (text.find_first_not_of(" \t") == std::string::npos) return out;
    std::string cur;
    int depth = 0;
    auto flush = [&] {
        out.push_back(parse_weight(cur, rank));
        cur.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth < 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
        if ((c == ',' || c == ';') && depth == 0) {
            flush();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
    flush();
    return out;
}

std::vector<Rational> parse_point_list(const std::string& text) {
    std::vector<Rational> out;
    if (text.find_first_not_of(" \t") == std::string::npos) return out;
    for (const auto& x : split(text, ',')) {
        if (x.empty()) throw std::invalid_argument("empty point in list '" + text + "'");
        out.push_back(parse_rational(x));
    }
    return out;
}

// ---- records ----------------------------------------------------------------------------------

Json to_json(const CheckRecord& r) {
    return {{"instance", r.instance}, {"check", r.check},   {"value", r.value},
            {"tolerance", r.tolerance}, {"status", status_name(r.status)}, {"counts", r.counts}};
}

void CriterionResult::add(CheckRecord r) { checks.push_back(std::move(r)); }

void CriterionResult::finish() {
    std::vector<CheckValue> v;
    int fails = 0, total = 0;
    for (const auto& c : checks)
        if (c.counts) {
            CheckValue cv;
            cv.status = c.status;
            v.push_back(cv);
            ++total;
            fails += c.status == CheckStatus::Fail;
        }
    status = v.empty() ? CheckStatus::Inconclusive : combine(v);
    if (summary.empty()) {
        std::ostringstream os;
        os << total - fails << "/" << total << " checks pass";
        summary = os.str();
    }
}

Json to_json(const CriterionResult& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"criterion", r.id},          {"title", r.title},     {"status", status_name(r.status)},
            {"seconds", num(r.seconds)},  {"summary", r.summary}, {"checks", checks}};
}

// ---- per-instance checks ----------------------------------------------------------------------

void check_representations(const Instance& inst, CriterionResult& out) {
    const auto& rs = inst.rs();
    std::set<std::vector<Rational>> seen;
    for (int i = 0; i < inst.tensor().size(); ++i) {
        const Irrep& v = inst.irrep(i);
        if (!seen.insert(v.highest_weight().coords).second) continue;
        std::string label = inst.name() + " V" + std::to_string(i);
        const Rational wd = weyl_dimension(rs, v.highest_weight());
        out.add(record(label, "dimension equals Weyl formula", Json{{"dim", v.dim()}, {"weyl", rat(wd)}}, nullptr,
                       Rational(v.dim()) == wd));
        const Rational c = casimir_eigenvalue(rs, v.highest_weight());
        const bool exact = casimir_operator(v, inst.lie()).is_scalar(c);
        out.add(record(label, "exact Casimir is (lambda, lambda + 2 rho)", rat(c), nullptr, exact));
        for (unsigned seed : {0u, 7u}) {
            auto J = killing_orthonormal_basis(v, inst.lie(), seed);
            CMatrix C = CMatrix::Zero(v.dim(), v.dim());
            for (const auto& m : J) C += m * m;
            const double dev = (C - to_double(c) * CMatrix::Identity(v.dim(), v.dim())).norm();
            out.add(record(label, std::string("orthonormal-basis Casimir") + (seed ? " (rotated basis)" : ""), num(dev),
                           1e-10, dev < 1e-10));
        }
    }
}

void check_blocks(const Instance& inst, CriterionResult& out) {
    const auto& bs = inst.blocks();
    const long v = verlinde_dimension(inst.rs(), inst.weights(), inst.level());
    Json value{{"blocks", bs.dim()}, {"invariants", bs.invariants.size()}, {"verlinde", v}};
    bool ok = bs.dim() == v;
    if (inst.rs().rank() == 1 && inst.rs().type() == CartanType::A) {
        std::vector<int> labels;
        for (const auto& w : inst.weights()) labels.push_back(static_cast<int>(w.coords[0].get_num().get_si()));
        const long paths = fusion_path_count_sl2(labels, inst.level());
        value["fusion_paths"] = paths;
        ok = ok && paths == v;
    }
    out.add(record(inst.name(), "block dimension equals Verlinde", value, nullptr, ok));
}

void check_forms(const Instance& inst, CriterionResult& out, const FormCheckOptions& opt,
                 std::vector<StratumResult>* strata) {
    const auto& tp = inst.tensor();
    const auto& bs = inst.blocks();
    const BetaMap& beta = inst.beta();
    const int M = beta.M;
    if (M == 0 || bs.invariants.empty()) {
        out.add(note(inst.name(), "forms", "no t variables or no invariants; nothing to check"));
        return;
    }
    if (opt.equivalence) {
        const ScalarForm& closed = inst.invariant_form();
        const ScalarForm gauge = pair_terms(gauge_reduction_terms(tp, beta), tp, bs.invariants, M);
        int equal = 0;
        for (int b = 0; b < closed.count(); ++b) equal += numerator(closed, b) == numerator(gauge, b);
        out.add(record(inst.name(), "closed formula equals gauge reduction (numerators over Q)",
                       Json{{"equal", equal}, {"functionals", closed.count()}, {"M", M}}, nullptr,
                       equal == closed.count()));
    }
    if (opt.poles) {
        const ScalarForm& closed = inst.invariant_form();
        for (int b = 0; b < closed.count(); ++b) {
            auto pr = pole_report(closed, b, inst.rs(), beta);
            out.add(record(inst.name(), "pole structure of invariant " + std::to_string(b),
                           Json{{"simple_poles", pr.simple_poles},
                                {"regular_at_infinity", pr.regular_at_infinity},
                                {"non_root_diagonals_regular", pr.non_root_diagonals_regular},
                                {"degree_at_infinity", pr.degree_at_infinity}},
                           nullptr, pr.pass));
        }
    }
    if (bs.dim() == 0) {
        out.add(note(inst.name(), "block checks", "block space is zero"));
        return;
    }
    std::mt19937_64 rng(opt.seed);
    if (opt.injectivity) {
        auto ir = injectivity_rank(inst.block_form(), inst.points(), rng);
        out.add(record(inst.name(), "block forms injective (rank = dim, gap >= 1e6)",
                       Json{{"rank", ir.rank}, {"exact_rank", ir.exact_rank}, {"dim", bs.dim()}, {"gap", num(ir.gap)}},
                       1e6, ir.pass));
    }
    if (opt.strata) {
        const auto specs = all_strata(M, tp.size());
        for (const auto& spec : specs) {
            Rational worst;
            bool ok = true, first = true;
            for (int b = 0; b < bs.dim(); ++b) {
                auto r = stratum_log_degree(inst.block_form(), b, inst.master(), spec, inst.points(), rng);
                ok = ok && r.pass;
                if (first || r.d_romega < worst) worst = r.d_romega;
                first = false;
                if (strata) strata->push_back(r);
            }
            std::ostringstream name;
            name << "d(R Omega) > 0 on " << stratum_name(spec.kind) << " {";
            for (std::size_t a = 0; a < spec.subset.size(); ++a) name << (a ? "," : "") << spec.subset[a];
            name << "}";
            if (spec.kind == StratumKind::S2) name << " -> " << spec.target_name();
            out.add(record(inst.name(), name.str(), rat(worst), 0, ok));
        }
    }
}

void check_braid(const Instance& inst, CriterionResult& out) {
    KZSystem sys(inst.tensor(), inst.lie(), inst.blocks().invariants, inst.level());
    out.add(record(inst.name(), "infinitesimal braid relations (exact)", Json{{"dim", sys.dim()}}, nullptr,
                   sys.braid_relations_hold()));
}

std::vector<std::pair<int, int>> default_loops(const Config& z) {
    std::set<std::pair<int, int>> pairs;
    const int n = static_cast<int>(z.size());
    for (int i = 0; i < n; ++i) {
        int best = -1;
        for (int j = 0; j < n; ++j)
            if (j != i && (best < 0 || std::abs(z[j] - z[i]) < std::abs(z[best] - z[i]))) best = j;
        if (best >= 0) pairs.insert({std::min(i, best), std::max(i, best)});
    }
    return {pairs.begin(), pairs.end()};
}

std::vector<Config> default_metric_path(const Config& z) {
    const double step = 0.05 * min_separation(z);
    Config end = z;
    // The first point stays put; the others move by distinct small amounts.
    for (std::size_t i = 1; i < z.size(); ++i) end[i] += step * std::polar(1.0, 0.9 * static_cast<double>(i));
    return {z, end};
}

void check_transport(const Instance& inst, CriterionResult& out, const TransportOptions& topt) {
    const auto& bs = inst.blocks();
    KZSystem sys(inst.tensor(), inst.lie(), bs.invariants, inst.level());
    const Config z = inst.complex_points();
    const int d = sys.dim();
    if (d == 0) {
        out.add(note(inst.name(), "transport", "no invariants"));
        return;
    }
    const CMatrix I = CMatrix::Identity(d, d);
    auto path = default_metric_path(z);
    auto there_back = parallel_transport(sys, concat_paths(path, reverse_path(path)), I, topt);
    const double dev = (there_back.matrix - I).norm();
    out.add(record(inst.name(), "transport there and back is the identity", num(dev), 1e-8, dev < 1e-8));

    if (bs.dim() == 0) return;
    const CMatrix B = block_subspace(inst.tensor(), bs.invariants, z, inst.level());
    for (auto [i, j] : default_loops(z)) {
        const CMatrix Mo = monodromy_matrix(sys, braid_loop(z, i, j), topt);
        const CMatrix m = B.adjoint() * Mo * B;
        const double leak = (Mo * B - B * m).norm();
        const std::string loop = "loop z" + std::to_string(j) + " around z" + std::to_string(i);
        out.add(record(inst.name(), loop + ": monodromy preserves the block subspace", num(leak), 1e-8, leak < 1e-8));
        if (B.cols() == 1) {
            const double mod = std::abs(m(0, 0));
            out.add(record(inst.name(), loop + ": one-dimensional block monodromy has modulus 1",
                           Json{{"m_re", m(0, 0).real()}, {"m_im", m(0, 0).imag()}, {"abs_minus_1", num(mod - 1)}},
                           1e-8, std::abs(mod - 1) < 1e-8));
        }
    }
}

void check_curvature(const Instance& inst, CriterionResult& out, const TransportOptions& topt) {
    KZSystem sys(inst.tensor(), inst.lie(), inst.blocks().invariants, inst.level());
    const Config z = inst.complex_points();
    const int moving = z.size() > 1 ? 1 : 0;
    const double side = 0.2 * min_separation(z);
    const int levels = 3;

    auto levels_json = [](const CurvatureReport& r) {
        Json a = Json::array();
        for (const auto& l : r.levels) a.push_back({{"area", num(l.area)}, {"deviation", num(l.deviation)}});
        return a;
    };

    auto lit = rectangle_curvature(sys, z, moving, side, levels, topt);
    out.add(record(inst.name(), "holonomy deviation O(area): log-log slope within 15% of 1",
                   Json{{"slope", num(lit.slope)}, {"levels", levels_json(lit)}}, 0.15, lit.slope_within));
    double estimate = 0;
    for (const auto& l : lit.levels) estimate = std::max(estimate, l.deviation / l.area);
    out.add(note(inst.name(), "curvature estimate max deviation / area (flat connection: round-off only)",
                 Json{{"estimate", num(estimate)}, {"max_deviation", num(lit.max_deviation)}}));

    // Control: constant non-commuting connection X dx + Y dy on the moving point, curvature [X, Y].
    CMatrix X(2, 2), Y(2, 2);
    X << 0, 1, 0, 0;
    Y << 0, 0, 1, 0;
    ConnectionFn control = [=](const Config&, const Config& dz) {
        return CMatrix(X * dz[moving].real() + Y * dz[moving].imag());
    };
    auto ctl = rectangle_curvature_general(control, 2, z, moving, side, levels, topt);
    out.add(record(inst.name(), "control connection with [X, Y] != 0: slope within 15% of 1",
                   Json{{"slope", num(ctl.slope)}, {"levels", levels_json(ctl)}}, 0.15, ctl.slope_within));
}

MetricRun check_metric(const Instance& inst, CriterionResult& out, const MetricOptions& opt) {
    MetricRun run;
    const auto& bs = inst.blocks();
    if (bs.dim() == 0) throw std::domain_error("block space is zero; there is no metric to compute");
    const ScalarForm& g = inst.block_form();
    const ProposalPlan plan = make_proposal_plan(g, inst.master(), inst.points(), opt.unitarity.mc.seed);
    const std::vector<Config> path = opt.path.empty() ? default_metric_path(inst.complex_points()) : opt.path;
    const Config& z0 = path.front();

    run.gram = gram_metric(g, inst.master(), plan, z0, opt.unitarity.mc);
    const auto& G = run.gram;
    out.add(record(inst.name(), "Gram matrix Hermitian within 3 sigma", num(G.hermitian_deviation), 3,
                   G.hermitian_deviation < 3));
    out.add(record(inst.name(), "Gram matrix positive definite",
                   Json{{"min_eigenvalue", num(G.min_eigenvalue)}, {"error_norm", num(G.error_norm())}}, nullptr,
                   G.positive_definite));
    out.add(note(inst.name(), "largest single-sample weight share", num(G.max_weight_share)));

    if (opt.convergence) {
        run.convergence = gram_convergence(g, inst.master(), plan, z0, opt.unitarity.mc);
        run.convergence_run = true;
        const auto& c = run.convergence;
        out.add(record(inst.name(), "Monte-Carlo error shrinks by sqrt 2 when samples double",
                       Json{{"ratio", num(c.ratio)}, {"max_discrepancy_sigma", num(c.max_discrepancy)}}, nullptr,
                       c.pass));
    }

    std::unique_ptr<KZSystem> sys;
    try {
        sys = std::make_unique<KZSystem>(inst.tensor(), inst.lie(), bs.basis, inst.level());
    } catch (const std::logic_error& e) {
        run.skipped = "block span is not closed under Omega_ij at these points; unitarity test skipped";
        out.add(note(inst.name(), "unitarity", run.skipped));
        return run;
    }
    UnitarityOptions uopt = opt.unitarity;
    if (uopt.loops.empty()) uopt.loops = default_loops(z0);
    run.unitarity = verify_unitary_flatness(*sys, g, inst.master(), plan, path, uopt);
    run.unitarity_run = true;
    for (const auto& c : run.unitarity.compatibility) out.add(from_value(inst.name(), c));
    for (std::size_t l = 0; l < run.unitarity.monodromy.size(); ++l) {
        out.add(from_value(inst.name(), run.unitarity.monodromy[l]));
        const double c = run.unitarity.fitted_c[l];
        out.add(record(inst.name(), run.unitarity.monodromy[l].check + ": fitted scale is positive", num(c), 0, c > 0));
    }
    return run;
}

// ---- criteria ---------------------------------------------------------------------------------

std::vector<std::unique_ptr<Instance>> form_suite_instances() {
    std::vector<std::unique_ptr<Instance>> v;
    v.push_back(std::make_unique<Instance>("A1", parse_weight_list("w,w", 1), 1, integer_points({0, 1})));
    v.push_back(std::make_unique<Instance>("A1", parse_weight_list("w,w,w,w", 1), 1, integer_points({0, 1, 3, 7})));
    v.push_back(std::make_unique<Instance>("A1", parse_weight_list("w,w,w,w", 1), 2, integer_points({0, 1, 3, 7})));
    v.push_back(std::make_unique<Instance>("A1", parse_weight_list("2w,w,w", 1), 2, integer_points({0, 2, 5})));
    v.push_back(std::make_unique<Instance>("A1", parse_weight_list("2w,2w,2w", 1), 3, integer_points({0, 2, 5})));
    v.push_back(std::make_unique<Instance>("A2", parse_weight_list("w1,w2", 2), 1, integer_points({0, 1})));
    v.push_back(std::make_unique<Instance>("A2", parse_weight_list("w1,w1,w1", 2), 1, integer_points({0, 2, 5})));
    return v;
}

CriterionResult criterion_roots(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 1;
    r.title = "root inequalities and sum-of-squares identity for every simple type up to rank " +
              std::to_string(opt.max_rank);
    const auto t0 = Clock::now();
    for (auto [type, rank] : all_simple_types(opt.max_rank)) {
        const RootSystem rs = build_root_system(type, rank);
        const auto rep = check_root_inequalities(rs);
        int failing = 0;
        for (const auto& rec : rep.records) failing += !rec.pass;
        r.add(record(rs.name(), "I(delta) <= sum of squares <= 2 g* for every positive root",
                     Json{{"roots", rep.records.size()}, {"failing", failing}}, nullptr, failing == 0));
        r.add(record(rs.name(), "sum_i b_i (d_i, d_i) = 2 (g* - 1)",
                     Json{{"value", rat(rep.theta_weighted_squares)}, {"target", rat(rep.identity_target)}}, nullptr,
                     rep.identity_pass));
    }
    const double t = seconds_since(t0);
    r.add(record("all", "runtime under 10 s", num(t), 10, t < 10));
    r.seconds = t;
    r.finish();
    return r;
}

CriterionResult criterion_block_dimensions(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 2;
    r.title = "conformal block dimension equals the Verlinde formula at random rational points";
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed);
    long instances = 0, agree = 0;
    auto run = [&](const std::string& alg, const std::vector<std::vector<int>>& labels, int k) {
        for (int s = 0; s < opt.random_points; ++s) {
            Instance inst(alg, labels, k, random_points(rng, static_cast<int>(labels.size())));
            CriterionResult tmp;
            check_blocks(inst, tmp);
            ++instances;
            if (tmp.checks.back().status == CheckStatus::Pass) {
                ++agree;
            } else {
                r.add(std::move(tmp.checks.back()));  // only disagreements are listed individually
            }
        }
    };
    for (int N : {2, 4, 5, 6})
        for (int k : {1, 2, 3})
            for (int mask = 0; mask < (1 << N); ++mask) {
                std::vector<std::vector<int>> labels;
                for (int i = 0; i < N; ++i) labels.push_back({(mask >> i) & 1});
                run("A1", labels, k);
            }
    const double a1 = seconds_since(t0);
    for (int k : {1, 2}) {
        std::vector<std::vector<int>> alcove;
        for (int a = 0; a <= k; ++a)
            for (int b = 0; a + b <= k; ++b) alcove.push_back({a, b});
        const int P = static_cast<int>(alcove.size());
        for (int N = 1; N <= 4; ++N) {
            std::vector<int> idx(N, 0);
            while (true) {
                std::vector<std::vector<int>> labels;
                for (int i : idx) labels.push_back(alcove[i]);
                run("A2", labels, k);
                int p = N - 1;
                while (p >= 0 && idx[p] == P - 1) --p;
                if (p < 0) break;
                ++idx[p];
                for (int q = p + 1; q < N; ++q) idx[q] = idx[p];
            }
        }
    }
    const double t = seconds_since(t0);
    r.add(record("all", "instances agreeing with Verlinde", Json{{"agree", agree}, {"instances", instances}}, nullptr,
                 agree == instances));
    r.add(note("A1 part", "seconds", num(a1)));
    r.add(record("all", "runtime under 120 s", num(t), 120, t < 120));
    r.seconds = t;
    r.finish();
    return r;
}

CriterionResult criterion_form_equivalence(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 3;
    r.title = "closed-formula correlation forms equal the gauge-reduction oracle, with the stated pole structure";
    const auto t0 = Clock::now();
    FormCheckOptions fo;
    fo.injectivity = fo.strata = false;
    fo.seed = opt.seed;
    for (const auto& inst : form_suite_instances()) check_forms(*inst, r, fo);
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_injectivity(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 4;
    r.title = "numerical rank of block forms at random configurations equals the block dimension";
    const auto t0 = Clock::now();
    FormCheckOptions fo;
    fo.equivalence = fo.poles = fo.strata = false;
    fo.seed = opt.seed;
    for (const auto& inst : form_suite_instances()) check_forms(*inst, r, fo);
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_extension(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 5;
    r.title = "positive log-degree of R Omega on every stratum, and the A1 S1 value 1 - 2/(k+2)";
    const auto t0 = Clock::now();
    FormCheckOptions fo;
    fo.equivalence = fo.poles = fo.injectivity = false;
    fo.seed = opt.seed;
    for (const auto& inst : form_suite_instances()) {
        std::vector<StratumResult> strata;
        check_forms(*inst, r, fo, &strata);
        const bool four_omega = inst->rs().name() == "A1" && inst->weights().size() == 4;
        if (!four_omega) continue;
        const int k = inst->level();
        const Rational expected = 1 - ratio(2, k + 2);
        for (const auto& s : strata)
            if (s.spec.kind == StratumKind::S1 && s.spec.L() == 2) {
                r.add(record(inst->name(), "S1 {0,1}: d(R Omega) = 1 - 2/(k+2)",
                             Json{{"value", rat(s.d_romega)}, {"d_omega", rat(s.d_omega)}, {"expected", rat(expected)}},
                             nullptr, s.d_romega == expected));
                break;
            }
    }
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_kz_flatness(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 6;
    r.title = "KZ flatness: braid relations exactly, holonomy of small rectangles O(area)";
    const auto t0 = Clock::now();
    TransportOptions topt;
    topt.tol = opt.transport_tol;
    Instance a4("A1", parse_weight_list("w,w,w,w", 1), 2, integer_points({0, 1, 2, 3}));
    Instance a6("A1", parse_weight_list("w,w,w,w,w,w", 1), 1, integer_points({0, 1, 2, 3, 4, 5}));
    Instance b4("A2", parse_weight_list("w1,w2,w1,w2", 2), 1, integer_points({0, 1, 2, 3}));
    for (const Instance* inst : {&a4, &a6, &b4}) check_braid(*inst, r);
    check_curvature(a4, r, topt);
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_affine_bound(const SuiteOptions&) {
    CriterionResult r;
    r.id = 7;
    r.title = "affine sl2 bound on f(b_1)...f(b_L)|lambda> for k <= 2, L <= 3, degree <= 6";
    const auto t0 = Clock::now();
    const auto words = admissible_words(3, 4, 6);
    for (int k : {1, 2})
        for (int j = 0; j <= k; ++j) {
            const auto rep = affine_bound_check(k, j, words, 6);
            r.add(record("affine A1 k=" + std::to_string(k) + " j=" + std::to_string(j),
                         "no nonzero word exceeds the bound",
                         Json{{"words", rep.records.size()},
                              {"nonzero", rep.nonzero_words},
                              {"counterexamples", rep.counterexamples}},
                         0, rep.pass && rep.counterexamples == 0));
        }
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_unitarity(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 8;
    r.title = "Gram metric Hermitian positive definite, KZ-compatible and monodromy-invariant";
    const auto t0 = Clock::now();
    TransportOptions topt;
    topt.tol = opt.transport_tol;

    Instance k2("A1", parse_weight_list("w,w,w,w", 1), 2, integer_points({0, 1, 2, 3}));
    MetricOptions mo;
    mo.convergence = false;
    mo.unitarity.mc.samples = opt.samples;
    mo.unitarity.mc.seed = opt.seed;
    mo.unitarity.transport = topt;
    mo.unitarity.tol = opt.unitarity_tol;
    mo.unitarity.step = 0.05;
    mo.unitarity.path_points = 3;
    mo.unitarity.loops = {{0, 1}, {1, 2}, {2, 3}};
    const Config z0 = k2.complex_points();
    mo.path = {z0, shifted(z0, {0., Complex(0.05, 0.05), Complex(-0.03, 0.04), 0.}, 1)};
    check_metric(k2, r, mo);

    Instance k1("A1", parse_weight_list("w,w,w,w", 1), 1, integer_points({0, 1, 2, 3}));
    check_transport(k1, r, topt);
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult criterion_flat_pairing(const SuiteOptions& opt) {
    CriterionResult r;
    r.id = 9;
    r.title = "pairing of a flat section with a twisted cycle is constant along a path";
    const auto t0 = Clock::now();
    TransportOptions topt;
    topt.tol = opt.transport_tol;
    Instance inst("A1", parse_weight_list("w,w,w,w", 1), 1, integer_points({0, 1, 2, 3}));
    const auto& bs = inst.blocks();
    KZSystem sys(inst.tensor(), inst.lie(), bs.invariants, inst.level());
    const ScalarForm& g = inst.invariant_form();
    CVector c0(bs.invariants.size());
    for (std::size_t c = 0; c < bs.invariants.size(); ++c) c0(c) = to_double(bs.coords(c, 0));
    const std::vector<PochhammerLoop> cycle{{0, 1, Complex(0.5, 0.5), 0.25}, {2, 3, Complex(2.5, 0.5), 0.25}};
    const Config z0 = inst.complex_points();
    const double d = 0.1 / std::sqrt(2.0);
    const std::vector<Config> path{z0, shifted(z0, {d, 0., 0., -d}, 1)};

    const auto rep = verify_flat_pairing(sys, g, inst.master(), c0, cycle, path, 4, opt.pairing_tol, topt);
    Json values = Json::array();
    for (std::size_t i = 0; i < rep.s.size(); ++i)
        values.push_back({{"s", num(rep.s[i])}, {"re", num(rep.values[i].real())}, {"im", num(rep.values[i].imag())}});
    r.add(record(inst.name(), "relative drift of the twisted period",
                 Json{{"drift", num(rep.drift)}, {"clearance", num(rep.clearance)}, {"values", values}},
                 opt.pairing_tol, rep.pass));

    ConnectionFn flipped = [&](const Config& z, const Config& dz) { return CMatrix(-sys.along(z, dz)); };
    const auto neg = verify_flat_pairing(sys, g, inst.master(), c0, cycle, path, 4, opt.pairing_tol, topt, flipped);
    r.add(note(inst.name(), "control: drift with the connection sign flipped", num(neg.drift)));
    r.seconds = seconds_since(t0);
    r.finish();
    return r;
}

CriterionResult run_criterion(int id, const SuiteOptions& opt) {
    switch (id) {
        case 1: return criterion_roots(opt);
        case 2: return criterion_block_dimensions(opt);
        case 3: return criterion_form_equivalence(opt);
        case 4: return criterion_injectivity(opt);
        case 5: return criterion_extension(opt);
        case 6: return criterion_kz_flatness(opt);
        case 7: return criterion_affine_bound(opt);
        case 8: return criterion_unitarity(opt);
        case 9: return criterion_flat_pairing(opt);
        default: throw std::invalid_argument("criteria are numbered 1 to 9");
    }
}

std::vector<CriterionResult> run_all(const SuiteOptions& opt) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 9; ++id) {
        const auto t0 = Clock::now();
        try {
            out.push_back(run_criterion(id, opt));
        } catch (const std::exception& e) {
            CriterionResult r;
            r.id = id;
            r.title = "criterion " + std::to_string(id);
            r.add(record("all", "completed without error", e.what(), nullptr, false));
            r.summary = std::string("error: ") + e.what();
            r.seconds = seconds_since(t0);
            r.finish();
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace kzu

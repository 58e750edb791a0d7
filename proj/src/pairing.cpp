#include "kzu/pairing.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kzu {

namespace {

constexpr int kOrder = 20;

// Gauss-Legendre nodes and weights on [0, 1], ascending.
const std::vector<std::pair<double, double>>& unit_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        using GL = boost::math::quadrature::gauss<double, kOrder>;
        std::vector<std::pair<double, double>> r;
        const auto& x = GL::abscissa();
        const auto& w = GL::weights();
        for (std::size_t k = 0; k < x.size(); ++k) {
            r.emplace_back(0.5 + 0.5 * x[k], 0.5 * w[k]);
            if (x[k] != 0) r.emplace_back(0.5 - 0.5 * x[k], 0.5 * w[k]);
        }
        std::sort(r.begin(), r.end());
        return r;
    }();
    return rule;
}

void add_segment(std::vector<LoopNode>& out, Complex a, Complex b, int panels) {
    for (int p = 0; p < panels; ++p)
        for (const auto& [u, w] : unit_rule()) {
            const double s = (p + u) / panels;
            out.push_back({a + s * (b - a), (b - a) * (w / panels), 0});
        }
}

void add_circle(std::vector<LoopNode>& out, Complex c, double r, double start, int orientation, int panels) {
    const double span = 2 * std::numbers::pi * orientation;
    for (int p = 0; p < panels; ++p)
        for (const auto& [u, w] : unit_rule()) {
            const double theta = start + span * (p + u) / panels;
            const Complex e = std::polar(r, theta);
            out.push_back({c + e, Complex(0, 1) * e * (span * w / panels), 0});
        }
}

double wrap(double x) { return std::remainder(x, 2 * std::numbers::pi); }

// Continue a logarithm from `prev` to the nearby value log(d).
Complex continue_log(Complex prev, Complex d) {
    return {std::log(std::abs(d)), prev.imag() + wrap(std::arg(d) - prev.imag())};
}

}  // namespace

TwistedPeriod::TwistedPeriod(const ScalarForm& g, const MasterFunction& mf, std::vector<PochhammerLoop> cycle,
                             const Config& z0, QuadratureOptions opt)
    : g_(&g), mf_(&mf), cycle_(std::move(cycle)), opt_(opt), centers_(z0) {
    const int M = mf.M();
    if (M < 1 || M > 2) throw std::invalid_argument("product cycles are supported for one or two t variables");
    if (static_cast<int>(cycle_.size()) != M) throw std::invalid_argument("one loop per t variable is required");
    if (static_cast<int>(z0.size()) != mf.N()) throw std::invalid_argument("configuration has the wrong size");
    std::vector<std::pair<double, double>> strips;
    for (const auto& loop : cycle_) {
        if (loop.first == loop.second || loop.first < 0 || loop.second < 0 || loop.first >= mf.N() ||
            loop.second >= mf.N())
            throw std::invalid_argument("bad Pochhammer loop points");
        if (loop.radius <= 0) throw std::invalid_argument("loop radius must be positive");
        double lo = loop.base.real(), hi = loop.base.real();
        for (int i : {loop.first, loop.second}) {
            lo = std::min(lo, z0[i].real() - loop.radius);
            hi = std::max(hi, z0[i].real() + loop.radius);
        }
        strips.emplace_back(lo, hi);
    }
    if (M == 2 && !(strips[0].second < strips[1].first || strips[1].second < strips[0].first))
        throw std::invalid_argument("loops must lie in disjoint vertical strips");
}

std::vector<LoopNode> TwistedPeriod::discretize(int a, const Config&) const {
    const auto& loop = cycle_[a];
    std::vector<LoopNode> out;
    for (int orientation : {1, -1})
        for (int i : {loop.first, loop.second}) {
            const Complex c = centers_[i];
            const Complex u = (loop.base - c) / std::abs(loop.base - c);
            const Complex anchor = c + loop.radius * u;
            add_segment(out, loop.base, anchor, opt_.segment_panels);
            add_circle(out, c, loop.radius, std::arg(u), orientation, opt_.circle_panels);
            add_segment(out, anchor, loop.base, opt_.segment_panels);
        }
    return out;
}

int TwistedPeriod::node_count() const {
    int n = 1;
    for (std::size_t a = 0; a < cycle_.size(); ++a) n *= static_cast<int>(discretize(a, centers_).size());
    return n;
}

double TwistedPeriod::clearance(const Config& z) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < cycle_.size(); ++a)
        for (const auto& node : discretize(a, z))
            for (const auto& zi : z) m = std::min(m, std::abs(node.t - zi));
    return m;
}

Complex TwistedPeriod::operator()(const Config& z, const CVector& coeffs) {
    const int M = mf_->M();
    const int N = mf_->N();
    if (static_cast<int>(z.size()) != N) throw std::invalid_argument("configuration has the wrong size");
    if (coeffs.size() != g_->count()) throw std::invalid_argument("coefficient vector has the wrong size");
    const auto& table = mf_->exponents();

    std::vector<Complex> x0(M + N);
    for (int a = 0; a < M; ++a) x0[a] = cycle_[a].base;
    for (int i = 0; i < N; ++i) x0[M + i] = z[i];
    if (!have_branch_) base_logs_.assign(table.size(), 0);
    for (std::size_t e = 0; e < table.size(); ++e) {
        const Complex d = x0[table[e].factor.p] - x0[table[e].factor.q];
        base_logs_[e] = have_branch_ ? continue_log(base_logs_[e], d) : std::log(d);
    }
    have_branch_ = true;

    Complex log_const = 0;
    for (std::size_t e = 0; e < table.size(); ++e)
        if (table[e].factor.p >= M) log_const += to_double(table[e].exponent) * base_logs_[e];

    std::vector<std::vector<LoopNode>> loops;
    for (int a = 0; a < M; ++a) {
        auto nodes = discretize(a, z);
        std::vector<std::size_t> mine;
        for (std::size_t e = 0; e < table.size(); ++e)
            if (table[e].factor.p == a && table[e].factor.q >= M) mine.push_back(e);
        std::vector<Complex> cur(mine.size());
        for (std::size_t k = 0; k < mine.size(); ++k) cur[k] = base_logs_[mine[k]];
        for (auto& node : nodes) {
            Complex s = 0;
            for (std::size_t k = 0; k < mine.size(); ++k) {
                const auto& f = table[mine[k]];
                cur[k] = continue_log(cur[k], node.t - z[f.factor.q - M]);
                s += to_double(f.exponent) * cur[k];
            }
            node.log_r = s;
        }
        loops.push_back(std::move(nodes));
    }

    std::vector<Complex> x = x0;
    auto integrand = [&](Complex log_r) {
        const auto v = evaluate(*g_, x);
        Complex s = 0;
        for (int b = 0; b < coeffs.size(); ++b) s += coeffs(b) * v[b];
        return std::exp(log_r) * s;
    };

    Complex total = 0;
    if (M == 1) {
        for (const auto& n1 : loops[0]) {
            x[0] = n1.t;
            total += n1.weight * integrand(log_const + n1.log_r);
        }
        return total;
    }
    Rational e12 = 0;
    std::size_t idx12 = 0;
    for (std::size_t e = 0; e < table.size(); ++e)
        if (table[e].factor.p == 0 && table[e].factor.q == 1) {
            e12 = table[e].exponent;
            idx12 = e;
        }
    const Complex d0 = x0[0] - x0[1];
    for (const auto& n1 : loops[0]) {
        x[0] = n1.t;
        Complex inner = 0;
        for (const auto& n2 : loops[1]) {
            x[1] = n2.t;
            const Complex l12 = base_logs_[idx12] + std::log((n1.t - n2.t) / d0);
            inner += n2.weight * integrand(log_const + n1.log_r + n2.log_r + to_double(e12) * l12);
        }
        total += n1.weight * inner;
    }
    return total;
}

std::vector<std::vector<Config>> split_path(const std::vector<Config>& path, int pieces) {
    if (path.empty() || pieces < 1) throw std::invalid_argument("bad path split");
    auto dist = [](const Config& a, const Config& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
        return std::sqrt(s);
    };
    std::vector<double> cum{0};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) cum.push_back(cum.back() + dist(path[k], path[k + 1]));
    const double total = cum.back();
    auto point_at = [&](double L) {
        std::size_t k = 0;
        while (k + 2 < path.size() && cum[k + 1] < L) ++k;
        if (path.size() == 1 || cum[k + 1] == cum[k]) return path[k];
        const double s = (L - cum[k]) / (cum[k + 1] - cum[k]);
        Config z(path[k].size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = path[k][i] + s * (path[k + 1][i] - path[k][i]);
        return z;
    };
    std::vector<std::vector<Config>> out;
    for (int p = 0; p < pieces; ++p) {
        const double lo = total * p / pieces, hi = total * (p + 1) / pieces;
        std::vector<Config> piece{point_at(lo)};
        for (std::size_t k = 1; k + 1 < path.size(); ++k)
            if (cum[k] > lo && cum[k] < hi) piece.push_back(path[k]);
        piece.push_back(point_at(hi));
        out.push_back(std::move(piece));
    }
    return out;
}

FlatPairingReport verify_flat_pairing(const KZSystem& sys, const ScalarForm& g, const MasterFunction& mf,
                                      const CVector& start, const std::vector<PochhammerLoop>& cycle,
                                      const std::vector<Config>& path, int samples, double tol,
                                      const TransportOptions& topt, const ConnectionFn& override_conn) {
    if (path.empty()) throw std::invalid_argument("empty path");
    if (start.size() != sys.dim()) throw std::invalid_argument("section has the wrong size");
    TwistedPeriod period(g, mf, cycle, path.front());
    FlatPairingReport rep;
    rep.tolerance = tol;
    double min_radius = std::numeric_limits<double>::infinity();
    for (const auto& l : cycle) min_radius = std::min(min_radius, l.radius);

    auto record = [&](double s, const Config& z, const CVector& c) {
        const double cl = period.clearance(z);
        if (cl < 0.1 * min_radius) throw std::domain_error("cycle comes too close to a marked point along the path");
        rep.clearance = rep.s.empty() ? cl : std::min(rep.clearance, cl);
        rep.s.push_back(s);
        rep.values.push_back(period(z, c));
    };

    CVector c = start;
    record(0, path.front(), c);
    const auto pieces = split_path(path, std::max(1, samples));
    double travelled = 0;
    for (const auto& piece : pieces) {
        CMatrix col = c;
        TransportResult tr =
            override_conn ? transport_general(override_conn, sys.dim(), piece, col, topt) : parallel_transport(sys, piece, col, topt);
        c = tr.matrix.col(0);
        rep.transport_steps += tr.steps;
        travelled += tr.length;
        record(travelled, piece.back(), c);
    }
    const double ref = std::abs(rep.values.front());
    for (const auto& v : rep.values) rep.drift = std::max(rep.drift, std::abs(v - rep.values.front()) / ref);
    rep.pass = ref > 0 && rep.drift < tol;
    return rep;
}

}  // namespace kzu

#include "kzu/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

namespace kzu {

TensorProduct::TensorProduct(std::vector<const Irrep*> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("tensor product needs at least one factor");
    const int n = size();
    stride_.assign(n, 1);
    for (int i = n - 1; i >= 0; --i) {
        stride_[i] = total_;
        total_ *= factors_[i]->dim();
        if (total_ > (TensorIndex(1) << 50)) throw std::length_error("tensor product too large to index");
    }
    auto d = zero_weight_depth();
    if (!d.empty()) zero_ = tensors_of_depth(d);
    for (std::size_t p = 0; p < zero_.size(); ++p) zero_pos_[zero_[p]] = static_cast<int>(p);
}

TensorIndex TensorProduct::encode(const std::vector<int>& digits) const {
    TensorIndex idx = 0;
    for (int i = 0; i < size(); ++i) idx += stride_[i] * digits[i];
    return idx;
}

std::vector<int> TensorProduct::decode(TensorIndex idx) const {
    std::vector<int> d(size());
    for (int i = 0; i < size(); ++i) d[i] = digit(idx, i);
    return d;
}

int TensorProduct::digit(TensorIndex idx, int factor) const {
    return static_cast<int>((idx / stride_[factor]) % factors_[factor]->dim());
}

TensorIndex TensorProduct::with_digit(TensorIndex idx, int factor, int value) const {
    return idx + stride_[factor] * (value - digit(idx, factor));
}

std::vector<int> TensorProduct::depth(TensorIndex idx) const {
    const int r = factors_[0]->root_system().rank();
    std::vector<int> d(r, 0);
    for (int i = 0; i < size(); ++i) {
        const auto& di = factors_[i]->depth(digit(idx, i));
        for (int l = 0; l < r; ++l) d[l] += di[l];
    }
    return d;
}

std::vector<int> TensorProduct::zero_weight_depth() const {
    const RootSystem& rs = factors_[0]->root_system();
    Weight mu = rs.zero_weight();
    for (const auto* f : factors_)
        for (int i = 0; i < rs.rank(); ++i) mu.coords[i] += f->highest_weight().coords[i];
    RatVector c = rs.weight_to_root_coords(mu);
    std::vector<int> d;
    for (const auto& x : c) {
        if (!is_integer(x) || sgn(x) < 0) return {};
        d.push_back(static_cast<int>(x.get_num().get_si()));
    }
    return d;
}

std::vector<TensorIndex> TensorProduct::tensors_of_depth(const std::vector<int>& total, int pinned) const {
    const int n = size();
    const int r = static_cast<int>(total.size());
    std::vector<TensorIndex> out;
    std::vector<int> remaining = total;
    std::function<void(int, TensorIndex)> rec = [&](int i, TensorIndex acc) {
        if (i == n) {
            for (int x : remaining)
                if (x != 0) return;
            out.push_back(acc);
            return;
        }
        const auto& spaces = factors_[i]->spaces();
        for (const auto& ws : spaces) {
            if (i == pinned && ws.offset != 0) continue;
            bool fits = true;
            for (int l = 0; l < r; ++l)
                if (ws.depth[l] > remaining[l]) fits = false;
            if (!fits) continue;
            if (i == n - 1 && ws.depth != remaining) continue;
            for (int l = 0; l < r; ++l) remaining[l] -= ws.depth[l];
            const int count = (i == pinned) ? 1 : ws.dim;
            for (int k = 0; k < count; ++k) rec(i + 1, acc + stride_[i] * (ws.offset + k));
            for (int l = 0; l < r; ++l) remaining[l] += ws.depth[l];
        }
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

int TensorProduct::zero_position(TensorIndex idx) const {
    auto it = zero_pos_.find(idx);
    return it == zero_pos_.end() ? -1 : it->second;
}

TensorState TensorProduct::apply(const SparseOp& op, int factor, const TensorState& v) const {
    TensorState out;
    for (const auto& [idx, x] : v) {
        const int d = digit(idx, factor);
        for (const auto& [row, y] : op.column(d)) {
            auto& slot = out[with_digit(idx, factor, row)];
            slot += x * y;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

Rational InvariantFunctional::pair(const TensorProduct& tp, const TensorState& v) const {
    Rational s = 0;
    for (const auto& [idx, x] : v) {
        int p = tp.zero_position(idx);
        if (p >= 0) s += coeffs[p] * x;
    }
    return s;
}

bool InvariantFunctional::is_zero() const {
    for (const auto& c : coeffs)
        if (sgn(c) != 0) return false;
    return true;
}

namespace {

/// Row of the constraint phi(rho(op) w) = 0 over zero-weight coordinates.
SparseColumn constraint_row(const TensorProduct& tp, const std::vector<const SparseOp*>& ops, TensorIndex w) {
    TensorState v{{w, Rational(1)}};
    TensorState img;
    for (int j = 0; j < tp.size(); ++j)
        for (const auto& [idx, x] : tp.apply(*ops[j], j, v)) img[idx] += x;
    SparseColumn row;
    for (const auto& [idx, x] : img) {
        int p = tp.zero_position(idx);
        if (p >= 0 && sgn(x) != 0) row.emplace_back(p, x);
    }
    return row;
}

std::vector<std::vector<SparseColumn>> generator_constraints(const TensorProduct& tp, bool raising) {
    std::vector<std::vector<SparseColumn>> out;
    auto d = tp.zero_weight_depth();
    if (d.empty()) return out;
    const int r = static_cast<int>(d.size());
    for (int i = 0; i < r; ++i) {
        auto src = d;
        if (raising) {
            ++src[i];
        } else if (--src[i] < 0) {
            out.emplace_back();
            continue;
        }
        std::vector<const SparseOp*> ops;
        for (int j = 0; j < tp.size(); ++j) ops.push_back(raising ? &tp.factor(j).e(i) : &tp.factor(j).f(i));
        std::vector<SparseColumn> rows;
        for (TensorIndex w : tp.tensors_of_depth(src)) rows.push_back(constraint_row(tp, ops, w));
        out.push_back(std::move(rows));
    }
    return out;
}

}  // namespace

std::vector<InvariantFunctional> invariants_basis(const TensorProduct& tp) {
    const int n = static_cast<int>(tp.zero_weight().size());
    std::vector<InvariantFunctional> out;
    if (n == 0) return out;
    SparseEchelon ech(n);
    for (auto& rows : generator_constraints(tp, true))
        for (auto& row : rows) ech.add(std::move(row));
    for (auto& v : ech.nullspace()) out.push_back({std::move(v)});
    return out;
}

bool is_invariant(const TensorProduct& tp, const InvariantFunctional& phi) {
    for (bool raising : {true, false})
        for (const auto& rows : generator_constraints(tp, raising))
            for (const auto& row : rows) {
                Rational s = 0;
                for (const auto& [p, x] : row) s += phi.coeffs[p] * x;
                if (sgn(s) != 0) return false;
            }
    return true;
}

BlockSpace conformal_block_basis(const TensorProduct& tp, const std::vector<Rational>& points, int level) {
    const int n = tp.size();
    if (static_cast<int>(points.size()) != n) throw std::invalid_argument("one point per weight is required");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (points[i] == points[j]) throw std::invalid_argument("marked points must be distinct");
    const RootSystem& rs = tp.factor(0).root_system();
    const Root& theta = rs.highest_root();
    const int top = static_cast<int>(rs.positive_roots().size()) - 1;

    BlockSpace bs;
    bs.points = points;
    bs.level = level;
    for (int i = 0; i < n; ++i) {
        const Weight& w = tp.factor(i).highest_weight();
        if (!rs.in_alcove(w, level)) throw std::invalid_argument("weight is not in P_k");
        bs.weights.push_back(w);
    }
    bs.invariants = invariants_basis(tp);
    const int ninv = static_cast<int>(bs.invariants.size());
    if (ninv == 0) {
        bs.coords = RatMatrix(0, 0);
        return bs;
    }
    auto zero_depth = tp.zero_weight_depth();

    SparseEchelon ech(ninv);
    for (int i = 0; i < n; ++i) {
        const Rational lt = rs.inner(tp.factor(i).highest_weight(), theta);
        const int p = level - static_cast<int>(lt.get_num().get_si()) + 1;
        auto src = zero_depth;
        for (int l = 0; l < rs.rank(); ++l) src[l] += p * theta.coords[l];
        for (TensorIndex v : tp.tensors_of_depth(src, i)) {
            TensorState w{{v, Rational(1)}};
            for (int step = 0; step < p && !w.empty(); ++step) {
                TensorState next;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const Rational c = 1 / (points[j] - points[i]);
                    for (const auto& [idx, x] : tp.apply(tp.factor(j).e_root(top), j, w)) next[idx] += c * x;
                }
                for (auto it = next.begin(); it != next.end();)
                    it = sgn(it->second) == 0 ? next.erase(it) : std::next(it);
                w = std::move(next);
            }
            SparseColumn row;
            for (int c = 0; c < ninv; ++c) {
                Rational s = bs.invariants[c].pair(tp, w);
                if (sgn(s) != 0) row.emplace_back(c, s);
            }
            ech.add(std::move(row));
        }
    }
    auto null = ech.nullspace();
    bs.coords = RatMatrix(ninv, null.size());
    for (std::size_t b = 0; b < null.size(); ++b) {
        InvariantFunctional phi{RatVector(tp.zero_weight().size())};
        for (int c = 0; c < ninv; ++c) {
            bs.coords(c, b) = null[b][c];
            if (sgn(null[b][c]) == 0) continue;
            for (std::size_t q = 0; q < phi.coeffs.size(); ++q) phi.coeffs[q] += null[b][c] * bs.invariants[c].coeffs[q];
        }
        bs.basis.push_back(std::move(phi));
    }
    return bs;
}

namespace {

/// W-orbit of a regular dominant weight (Dynkin labels) with signs det(w).
std::vector<std::pair<std::vector<long>, int>> signed_orbit(const RootSystem& rs, const std::vector<long>& start) {
    const int r = rs.rank();
    const auto& a = rs.cartan();
    std::map<std::vector<long>, int> seen{{start, 1}};
    std::deque<std::vector<long>> queue{start};
    while (!queue.empty()) {
        auto w = queue.front();
        queue.pop_front();
        const int sign = seen[w];
        for (int i = 0; i < r; ++i) {
            if (w[i] == 0) continue;
            auto v = w;
            // s_i(w) = w - w_i alpha_i, and alpha_i has Dynkin labels a[i][*]
            for (int j = 0; j < r; ++j) v[j] -= w[i] * a[i][j];
            if (seen.emplace(v, -sign).second) queue.push_back(v);
        }
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

long verlinde_dimension(const RootSystem& rs, const std::vector<Weight>& weights, int level) {
    for (const auto& w : weights)
        if (!rs.in_alcove(w, level)) throw std::invalid_argument("weight is not in P_k");
    const int r = rs.rank();
    const double kappa = level + rs.dual_coxeter();
    const double pi = std::numbers::pi;

    // alcove P_k
    std::vector<Weight> alcove;
    std::function<void(int, Weight&)> rec = [&](int i, Weight& w) {
        if (i == r) {
            if (rs.in_alcove(w, level)) alcove.push_back(w);
            return;
        }
        for (int x = 0; x <= level; ++x) {
            w.coords[i] = x;
            rec(i + 1, w);
        }
        w.coords[i] = 0;
    };
    Weight w0 = rs.zero_weight();
    rec(0, w0);

    auto shifted = [&](const Weight& w) {
        Weight s = w;
        for (int i = 0; i < r; ++i) s.coords[i] += 1;
        return s;
    };
    auto to_long = [&](const Weight& w) {
        std::vector<long> v;
        for (const auto& c : w.coords) v.push_back(c.get_num().get_si());
        return v;
    };
    // orbit of lambda + rho for each distinct lambda (including 0)
    std::map<std::vector<long>, std::vector<std::pair<std::vector<long>, int>>> orbits;
    auto orbit_of = [&](const Weight& w) -> const auto& {
        auto key = to_long(w);
        auto it = orbits.find(key);
        if (it == orbits.end()) it = orbits.emplace(key, signed_orbit(rs, to_long(shifted(w)))).first;
        return it->second;
    };
    auto character = [&](const Weight& lambda, const Weight& mu) {
        // sum_w det(w) exp(-2 pi i (w(lambda + rho), mu + rho)/kappa)
        Weight m = shifted(mu);
        std::complex<double> s = 0;
        for (const auto& [v, sign] : orbit_of(lambda)) {
            Weight wv{RatVector(v.begin(), v.end())};
            double x = to_double(rs.inner(wv, m));
            s += double(sign) * std::exp(std::complex<double>(0, -2 * pi * x / kappa));
        }
        return s;
    };

    std::vector<double> s0;
    double norm = 0;
    for (const auto& mu : alcove) {
        double p = 1;
        Weight m = shifted(mu);
        for (const auto& a : rs.positive_roots()) p *= 2 * std::sin(pi * to_double(rs.inner(m, a)) / kappa);
        s0.push_back(p);
        norm += p * p;
    }
    std::complex<double> total = 0;
    const Weight zero = rs.zero_weight();
    for (std::size_t m = 0; m < alcove.size(); ++m) {
        std::complex<double> term = s0[m] * s0[m] / norm;
        const auto denom = character(zero, alcove[m]);
        for (const auto& w : weights) term *= character(w, alcove[m]) / denom;
        total += term;
    }
    const double v = total.real();
    const long rounded = std::lround(v);
    if (std::abs(v - rounded) > 1e-6 || std::abs(total.imag()) > 1e-6)
        throw std::logic_error("Verlinde sum is not an integer");
    return rounded;
}

long fusion_path_count_sl2(const std::vector<int>& labels, int level) {
    std::vector<long> state(level + 1, 0);
    state[0] = 1;
    for (int a : labels) {
        if (a < 0 || a > level) throw std::invalid_argument("sl2 label outside P_k");
        std::vector<long> next(level + 1, 0);
        for (int b = 0; b <= level; ++b) {
            if (state[b] == 0) continue;
            for (int c = std::abs(a - b); c <= std::min(a + b, 2 * level - a - b); c += 2) next[c] += state[b];
        }
        state = next;
    }
    return state[0];
}

}  // namespace kzu

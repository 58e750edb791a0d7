#include "kzu/rootsys.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace kzu {

char type_letter(CartanType t) { return "ABCDEFG"[static_cast<int>(t)]; }

CartanType parse_cartan_type(char letter) {
    switch (letter) {
        case 'A': case 'a': return CartanType::A;
        case 'B': case 'b': return CartanType::B;
        case 'C': case 'c': return CartanType::C;
        case 'D': case 'd': return CartanType::D;
        case 'E': case 'e': return CartanType::E;
        case 'F': case 'f': return CartanType::F;
        case 'G': case 'g': return CartanType::G;
        default: throw std::invalid_argument(std::string("unknown Cartan type '") + letter + "'");
    }
}

int Root::height() const { return std::accumulate(coords.begin(), coords.end(), 0); }

bool Weight::is_dominant_integral() const {
    for (const auto& c : coords)
        if (!is_integer(c) || sgn(c) < 0) return false;
    return true;
}

static void check_type(CartanType type, int rank) {
    bool ok = false;
    switch (type) {
        case CartanType::A: ok = rank >= 1; break;
        case CartanType::B: ok = rank >= 2; break;
        case CartanType::C: ok = rank >= 2; break;
        case CartanType::D: ok = rank >= 4; break;
        case CartanType::E: ok = rank >= 6 && rank <= 8; break;
        case CartanType::F: ok = rank == 4; break;
        case CartanType::G: ok = rank == 2; break;
    }
    if (!ok || rank > 64)
        throw std::invalid_argument(std::string("invalid simple type ") + type_letter(type) + std::to_string(rank));
}

std::vector<std::vector<int>> cartan_matrix(CartanType type, int n) {
    check_type(type, n);
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 2;
    auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
    switch (type) {
        case CartanType::A:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            break;
        case CartanType::B:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            a[n - 2][n - 1] = -2;  // last root short
            break;
        case CartanType::C:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            a[n - 1][n - 2] = -2;  // last root long
            break;
        case CartanType::D:
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
            link(n - 3, n - 1);
            break;
        case CartanType::E:
            link(0, 2);
            link(1, 3);
            for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
            break;
        case CartanType::F:
            link(0, 1);
            link(1, 2);
            link(2, 3);
            a[1][2] = -2;
            break;
        case CartanType::G:
            a[0][1] = -1;
            a[1][0] = -3;  // a_1 short
            break;
    }
    return a;
}

std::vector<std::pair<CartanType, int>> all_simple_types(int max_rank) {
    std::vector<std::pair<CartanType, int>> out;
    for (int n = 1; n <= max_rank; ++n) out.emplace_back(CartanType::A, n);
    for (int n = 2; n <= max_rank; ++n) out.emplace_back(CartanType::B, n);
    for (int n = 3; n <= max_rank; ++n) out.emplace_back(CartanType::C, n);
    for (int n = 4; n <= max_rank; ++n) out.emplace_back(CartanType::D, n);
    for (int n = 6; n <= std::min(8, max_rank); ++n) out.emplace_back(CartanType::E, n);
    if (max_rank >= 4) out.emplace_back(CartanType::F, 4);
    if (max_rank >= 2) out.emplace_back(CartanType::G, 2);
    return out;
}

RootSystem build_root_system(CartanType type, int rank) {
    RootSystem rs;
    rs.type_ = type;
    rs.rank_ = rank;
    rs.cartan_ = cartan_matrix(type, rank);
    const auto& a = rs.cartan_;

    // Symmetrizer d_j = (a_j, a_j)/2 from a_ij d_j = a_ji d_i, propagated along the Dynkin graph.
    std::vector<Rational> d(rank);
    std::vector<bool> seen(rank, false);
    d[0] = 1;
    seen[0] = true;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (int j = 0; j < rank; ++j) {
            if (seen[j] || a[i][j] == 0) continue;
            d[j] = Rational(a[j][i]) * d[i] / a[i][j];
            seen[j] = true;
            queue.push_back(j);
        }
    }

    // Positive roots by height via root strings.
    std::vector<Root> roots;
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < rank; ++i) {
        Root r{std::vector<int>(rank, 0)};
        r.coords[i] = 1;
        index[r.coords] = static_cast<int>(roots.size());
        roots.push_back(r);
    }
    for (std::size_t cur = 0; cur < roots.size(); ++cur) {
        const Root beta = roots[cur];
        for (int i = 0; i < rank; ++i) {
            int p = 0;
            for (;;) {
                auto c = beta.coords;
                c[i] -= p + 1;
                if (c[i] < 0 || !index.count(c)) break;
                ++p;
            }
            int pairing = 0;  // <beta, a_i^vee>
            for (int j = 0; j < rank; ++j) pairing += beta.coords[j] * a[j][i];
            int q = p - pairing;
            if (q > 0) {
                auto c = beta.coords;
                c[i] += 1;
                if (!index.count(c)) {
                    index[c] = static_cast<int>(roots.size());
                    roots.push_back(Root{c});
                }
            }
        }
    }
    std::stable_sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) {
        if (x.height() != y.height()) return x.height() < y.height();
        return x.coords > y.coords;
    });
    rs.positive_ = roots;
    for (std::size_t k = 0; k < roots.size(); ++k) rs.index_[roots[k].coords] = static_cast<int>(k);

    // Gram matrix, then rescale so that the highest root has squared length 2.
    RatMatrix g(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = Rational(a[i][j]) * d[j];
    const auto& theta = rs.positive_.back().coords;
    Rational tt;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) tt += Rational(theta[i] * theta[j]) * g(i, j);
    Rational scale = Rational(2) / tt;
    rs.gram_ = g * scale;

    RatMatrix at(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) at(i, j) = a[j][i];
    rs.cartan_transpose_inverse_ = inverse(at);

    rs.rho_.assign(rank, Rational(0));
    for (const auto& r : rs.positive_)
        for (int i = 0; i < rank; ++i) rs.rho_[i] += ratio(r.coords[i], 2);

    Rational rho_theta;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) rho_theta += rs.rho_[i] * Rational(theta[j]) * rs.gram_(i, j);
    Rational gstar = rho_theta + 1;
    if (!is_integer(gstar)) throw std::logic_error("dual Coxeter number not integral");
    rs.dual_coxeter_ = static_cast<int>(gstar.get_num().get_si());
    return rs;
}

RootSystem build_root_system(const std::string& name) {
    if (name.size() < 2) throw std::invalid_argument("algebra name must look like A1, G2, E8");
    CartanType t = parse_cartan_type(name[0]);
    int rank = 0;
    try {
        std::size_t used = 0;
        rank = std::stoi(name.substr(1), &used);
        if (used != name.size() - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("bad algebra name '" + name + "'");
    }
    return build_root_system(t, rank);
}

std::string RootSystem::name() const { return std::string(1, type_letter(type_)) + std::to_string(rank_); }

Root RootSystem::simple_root(int i) const {
    Root r{std::vector<int>(rank_, 0)};
    r.coords.at(i) = 1;
    return r;
}

int RootSystem::root_index(const Root& r) const {
    auto it = index_.find(r.coords);
    return it == index_.end() ? -1 : it->second;
}

bool RootSystem::is_positive_root(const std::vector<int>& coords) const { return index_.count(coords) > 0; }

Rational RootSystem::inner(const Root& x, const Root& y) const {
    Rational s;
    for (int i = 0; i < rank_; ++i) {
        if (x.coords[i] == 0) continue;
        for (int j = 0; j < rank_; ++j)
            if (y.coords[j] != 0) s += Rational(x.coords[i] * y.coords[j]) * gram_(i, j);
    }
    return s;
}

RatVector RootSystem::weight_to_root_coords(const Weight& w) const {
    if (static_cast<int>(w.coords.size()) != rank_) throw std::invalid_argument("weight has wrong rank");
    return cartan_transpose_inverse_ * w.coords;
}

Rational RootSystem::inner(const Weight& x, const Weight& y) const {
    RatVector a = weight_to_root_coords(x);
    RatVector b = weight_to_root_coords(y);
    return dot(a, gram_ * b);
}

Rational RootSystem::inner(const Weight& x, const Root& y) const {
    RatVector a = weight_to_root_coords(x);
    Rational s;
    for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j)
            if (y.coords[j] != 0) s += a[i] * Rational(y.coords[j]) * gram_(i, j);
    return s;
}

Weight RootSystem::root_to_weight(const std::vector<int>& coords) const {
    Weight w{RatVector(rank_)};
    for (int j = 0; j < rank_; ++j)
        for (int i = 0; i < rank_; ++i) w.coords[j] += Rational(coords[i] * cartan_[i][j]);
    return w;
}

Weight RootSystem::fundamental_weight(int i) const {
    Weight w{RatVector(rank_)};
    w.coords.at(i) = 1;
    return w;
}

Weight RootSystem::zero_weight() const { return Weight{RatVector(rank_)}; }

Weight RootSystem::rho() const { return Weight{RatVector(rank_, Rational(1))}; }

bool RootSystem::in_alcove(const Weight& w, int level) const {
    return w.is_dominant_integral() && inner(w, highest_root()) <= level;
}

bool RootSystem::in_root_lattice(const Weight& w) const {
    for (const auto& c : weight_to_root_coords(w))
        if (!is_integer(c)) return false;
    return true;
}

RootDecomposition decompose_positive_root(const RootSystem& rs, const Root& delta) {
    if (static_cast<int>(delta.coords.size()) != rs.rank() || rs.root_index(delta) < 0)
        throw std::invalid_argument("not a positive root");
    RootDecomposition out;
    out.multiset = delta.coords;

    // Depth-first search extending by the lowest admissible simple root first.
    std::vector<int> partial(rs.rank(), 0);
    std::vector<int> path;
    std::function<bool()> extend = [&]() -> bool {
        if (partial == delta.coords) return true;
        for (int i = 0; i < rs.rank(); ++i) {
            if (partial[i] + 1 > delta.coords[i]) continue;
            ++partial[i];
            if (rs.is_positive_root(partial)) {
                path.push_back(i);
                if (extend()) return true;
                path.pop_back();
            }
            --partial[i];
        }
        return false;
    };
    if (!extend()) throw std::logic_error("no witness ordering found");
    out.witness = path;
    return out;
}

RootInequalityReport check_root_inequalities(const RootSystem& rs) {
    RootInequalityReport rep;
    rep.algebra = rs.name();
    rep.rank = rs.rank();
    const Rational two_gstar = 2 * rs.dual_coxeter();
    bool all = true;
    for (const auto& delta : rs.positive_roots()) {
        if (delta.height() <= 1) continue;
        RootInequalityRecord rec;
        rec.root = delta;
        rec.two_gstar = two_gstar;
        const auto& c = delta.coords;
        // I(delta) = sum_{i<j} (d_i, d_j) over the multiset of simple summands
        for (int i = 0; i < rs.rank(); ++i) {
            if (c[i] == 0) continue;
            const Rational& aii = rs.gram()(i, i);
            rec.sum_squares += Rational(c[i]) * aii;
            rec.i_delta += ratio(c[i] * (c[i] - 1), 2) * aii;
            for (int j = i + 1; j < rs.rank(); ++j)
                if (c[j] != 0) rec.i_delta += Rational(c[i] * c[j]) * rs.gram()(i, j);
        }
        rec.pass = sgn(rec.i_delta) < 0 && rec.sum_squares < two_gstar;
        all = all && rec.pass;
        rep.records.push_back(std::move(rec));
    }
    const auto& theta = rs.highest_root().coords;
    for (int i = 0; i < rs.rank(); ++i) rep.theta_weighted_squares += Rational(theta[i]) * rs.gram()(i, i);
    rep.identity_target = 2 * (rs.dual_coxeter() - 1);
    rep.identity_pass = rep.theta_weighted_squares == rep.identity_target;
    rep.pass = all && rep.identity_pass;
    return rep;
}

}  // namespace kzu

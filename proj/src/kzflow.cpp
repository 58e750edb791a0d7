#include "kzu/kzflow.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace kzu {

CMatrix to_complex(const RatMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = to_double(m(r, c));
    return out;
}

CMatrix to_complex(const SparseOp& m) {
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c)) out(r, c) = to_double(v);
    return out;
}

std::vector<CMatrix> killing_orthonormal_basis(const Irrep& v, const LieStructure& lie, unsigned rotation_seed) {
    const int r = v.root_system().rank();
    Eigen::MatrixXd H(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) H(i, j) = to_double(lie.cartan_form(i, j));
    Eigen::MatrixXd Linv = Eigen::LLT<Eigen::MatrixXd>(H).matrixL().solve(Eigen::MatrixXd::Identity(r, r));

    std::vector<CMatrix> h;
    for (int i = 0; i < r; ++i) h.push_back(to_complex(v.h(i)));
    std::vector<CMatrix> basis;
    for (int a = 0; a < r; ++a) {
        CMatrix j = CMatrix::Zero(v.dim(), v.dim());
        for (int i = 0; i < r; ++i) j += Linv(a, i) * h[i];
        basis.push_back(std::move(j));
    }
    const Complex I(0, 1);
    for (std::size_t d = 0; d < lie.root_norm.size(); ++d) {
        CMatrix e = to_complex(v.e_root(d));
        CMatrix f = to_complex(v.f_root(d));
        // (e, f) may be negative with the bracket sign convention; swap the factor i accordingly.
        const double c = to_double(lie.root_norm[d]);
        const double s = std::sqrt(2 * std::abs(c));
        if (c > 0) {
            basis.push_back((e + f) / s);
            basis.push_back(I * (e - f) / s);
        } else {
            basis.push_back(I * (e + f) / s);
            basis.push_back((e - f) / s);
        }
    }
    if (rotation_seed == 0) return basis;

    const int n = static_cast<int>(basis.size());
    std::mt19937_64 rng(rotation_seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    std::vector<CMatrix> rotated;
    for (int a = 0; a < n; ++a) {
        CMatrix j = CMatrix::Zero(v.dim(), v.dim());
        for (int b = 0; b < n; ++b) j += q(a, b) * basis[b];
        rotated.push_back(std::move(j));
    }
    return rotated;
}

namespace {

SparseOp kron(const SparseOp& a, const SparseOp& b) {
    SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ca = 0; ca < a.cols(); ++ca)
        for (int cb = 0; cb < b.cols(); ++cb)
            for (const auto& [ra, x] : a.column(ca))
                for (const auto& [rb, y] : b.column(cb)) out.add(ra * b.rows() + rb, ca * b.cols() + cb, x * y);
    return out;
}

void prune(TensorState& s) {
    for (auto it = s.begin(); it != s.end();) it = sgn(it->second) == 0 ? s.erase(it) : std::next(it);
}

void accumulate(TensorState& into, const TensorState& v, const Rational& c) {
    for (const auto& [idx, x] : v) into[idx] += c * x;
}

// Omega_ij applied to one tensor.
TensorState apply_omega(const TensorProduct& tp, const LieStructure& lie, int i, int j, const TensorState& v) {
    const int r = tp.factor(0).root_system().rank();
    TensorState out;
    for (int a = 0; a < r; ++a) {
        TensorState ha = tp.apply(tp.factor(j).h(a), j, v);
        for (int b = 0; b < r; ++b) {
            const Rational& c = lie.cartan_form_inverse(a, b);
            if (sgn(c) == 0) continue;
            accumulate(out, tp.apply(tp.factor(i).h(b), i, ha), c);
        }
    }
    for (std::size_t d = 0; d < lie.root_norm.size(); ++d) {
        const Rational c = 1 / lie.root_norm[d];
        accumulate(out, tp.apply(tp.factor(i).e_root(d), i, tp.apply(tp.factor(j).f_root(d), j, v)), c);
        accumulate(out, tp.apply(tp.factor(i).f_root(d), i, tp.apply(tp.factor(j).e_root(d), j, v)), c);
    }
    prune(out);
    return out;
}

}  // namespace

RatMatrix two_point_casimir(const Irrep& v, const Irrep& w, const LieStructure& lie) {
    const int r = v.root_system().rank();
    SparseOp out(v.dim() * w.dim(), v.dim() * w.dim());
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) out = out + kron(v.h(a), w.h(b)) * lie.cartan_form_inverse(a, b);
    for (std::size_t d = 0; d < lie.root_norm.size(); ++d) {
        const Rational c = 1 / lie.root_norm[d];
        out = out + (kron(v.e_root(d), w.f_root(d)) + kron(v.f_root(d), w.e_root(d))) * c;
    }
    return out.dense();
}

KZSystem::KZSystem(const TensorProduct& tp, const LieStructure& lie, const std::vector<InvariantFunctional>& basis,
                   int level)
    : n_(tp.size()), dim_(static_cast<int>(basis.size())) {
    const RootSystem& rs = tp.factor(0).root_system();
    if (level < 1) throw std::invalid_argument("level must be positive");
    kappa_ = Rational(level + rs.dual_coxeter());
    const auto& zero = tp.zero_weight();
    std::vector<RatVector> span;
    for (const auto& phi : basis) span.push_back(phi.coeffs);

    K_.assign(n_ * n_, RatMatrix(dim_, dim_));
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            // row p: the functionals phi_b o Omega_ij evaluated on zero-weight tensor p
            std::vector<RatVector> composed(dim_, RatVector(zero.size()));
            for (std::size_t p = 0; p < zero.size(); ++p) {
                TensorState w = apply_omega(tp, lie, i, j, TensorState{{zero[p], Rational(1)}});
                for (int b = 0; b < dim_; ++b) composed[b][p] = basis[b].pair(tp, w);
            }
            RatMatrix k(dim_, dim_);
            for (int b = 0; b < dim_; ++b) {
                auto x = solve_in_span(span, composed[b]);
                if (!x) throw std::logic_error("functional span is not preserved by Omega");
                for (int c = 0; c < dim_; ++c) k(c, b) = (*x)[c];
            }
            K_[i * n_ + j] = k;
            K_[j * n_ + i] = k;
        }
    for (const auto& k : K_) Kc_.push_back(to_complex(k));
}

CMatrix KZSystem::connection(int i, const Config& z) const {
    if (static_cast<int>(z.size()) != n_) throw std::invalid_argument("configuration has the wrong number of points");
    const double kappa = to_double(kappa_);
    CMatrix a = CMatrix::Zero(dim_, dim_);
    for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        const Complex d = z[i] - z[j];
        if (d == Complex(0)) throw std::domain_error("coincident marked points");
        a += Kc_[i * n_ + j] / (kappa * d);
    }
    return a;
}

CMatrix KZSystem::along(const Config& z, const Config& dz) const {
    const double kappa = to_double(kappa_);
    CMatrix a = CMatrix::Zero(dim_, dim_);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            const Complex d = z[i] - z[j];
            if (d == Complex(0)) throw std::domain_error("coincident marked points");
            a += Kc_[i * n_ + j] * ((dz[i] - dz[j]) / (kappa * d));
        }
    return a;
}

std::vector<CVector> KZSystem::kz_derivative(const Config& z, const CVector& c) const {
    std::vector<CVector> out;
    for (int i = 0; i < n_; ++i) out.push_back(connection(i, z) * c);
    return out;
}

bool KZSystem::braid_relations_hold() const {
    auto k = [&](int i, int j) -> const RatMatrix& { return K_[i * n_ + j]; };
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b) {
                    if (a == b || a == i || a == j || b == i || b == j) continue;
                    if (!commutator(k(i, j), k(a, b)).is_zero()) return false;
                }
            for (int l = 0; l < n_; ++l) {
                if (l == i || l == j) continue;
                if (!commutator(k(i, j), k(i, l) + k(j, l)).is_zero()) return false;
            }
        }
    return true;
}

double min_separation(const Config& z) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) m = std::min(m, std::abs(z[i] - z[j]));
    return m;
}

namespace {

double config_distance(const Config& a, const Config& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// Smallest |z_i - z_j| on the straight segment from a to b.
double segment_separation(const Config& a, const Config& b) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const Complex d0 = a[i] - a[j];
            const Complex dd = (b[i] - b[j]) - d0;
            double s = 0;
            if (std::norm(dd) > 0) s = std::clamp(-std::real(std::conj(dd) * d0) / std::norm(dd), 0.0, 1.0);
            m = std::min(m, std::abs(d0 + s * dd));
        }
    return m;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

TransportResult transport_general(const ConnectionFn& conn, int dim, const std::vector<Config>& path,
                                  const CMatrix& start, const TransportOptions& opt) {
    if (path.empty()) throw std::invalid_argument("empty path");
    if (start.rows() != dim) throw std::invalid_argument("start matrix has the wrong size");
    TransportResult res;
    res.matrix = start;
    res.min_separation = min_separation(path.front());
    const double margin = opt.margin_factor * min_separation(path.front());
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        res.min_separation = std::min(res.min_separation, segment_separation(path[k], path[k + 1]));
    if (path.front().size() > 1 && res.min_separation < margin)
        throw std::domain_error("path passes within the diagonal margin");

    CMatrix& y = res.matrix;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const Config& za = path[k];
        const Config& zb = path[k + 1];
        const double len = config_distance(za, zb);
        if (len == 0) continue;
        res.length += len;
        Config dz(za.size());
        for (std::size_t i = 0; i < za.size(); ++i) dz[i] = zb[i] - za[i];
        auto rhs = [&](double s, const CMatrix& m) {
            Config z(za.size());
            for (std::size_t i = 0; i < za.size(); ++i) z[i] = za[i] + s * dz[i];
            return CMatrix(conn(z, dz) * m);
        };
        // step size and error in units of s in [0, 1]; the error budget is tol per unit of path length
        double s = 0;
        double h = std::min(1.0, opt.initial_step / len);
        CMatrix k1 = rhs(0, y);
        while (s < 1) {
            if (++res.steps > opt.max_steps) throw std::runtime_error("transport exceeded the step limit");
            h = std::min(h, 1 - s);
            if (h * len < opt.min_step) throw std::runtime_error("transport step size underflow");
            CMatrix k2 = rhs(s + c2 * h, y + h * a21 * k1);
            CMatrix k3 = rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
            CMatrix k4 = rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            CMatrix k5 = rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            CMatrix k6 = rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            CMatrix yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            CMatrix k7 = rhs(s + h, yn);
            CMatrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double scale = std::max(1.0, yn.cwiseAbs().maxCoeff());
            const double e = err.cwiseAbs().maxCoeff() / scale;
            const double budget = opt.tol * h * len;
            if (e <= budget) {
                s += h;
                y = yn;
                k1 = k7;
                res.max_error = std::max(res.max_error, e);
            } else {
                ++res.rejected;
            }
            // error ~ h^5 against a budget linear in h
            const double ratio = e > 0 ? budget / e : 1e4;
            h *= std::clamp(0.9 * std::pow(ratio, 0.25), 0.2, 5.0);
        }
    }
    return res;
}

TransportResult parallel_transport(const KZSystem& sys, const std::vector<Config>& path, const CMatrix& start,
                                   const TransportOptions& opt) {
    for (const auto& z : path)
        if (static_cast<int>(z.size()) != sys.points())
            throw std::invalid_argument("configuration has the wrong number of points");
    return transport_general([&](const Config& z, const Config& dz) { return sys.along(z, dz); }, sys.dim(), path,
                             start, opt);
}

CMatrix monodromy_matrix(const KZSystem& sys, const std::vector<Config>& loop, const TransportOptions& opt,
                         TransportResult* diagnostics) {
    if (loop.size() < 2 || config_distance(loop.front(), loop.back()) > 1e-12)
        throw std::invalid_argument("monodromy requires a closed loop");
    auto res = parallel_transport(sys, loop, CMatrix::Identity(sys.dim(), sys.dim()), opt);
    if (diagnostics) *diagnostics = res;
    return res.matrix;
}

std::vector<Config> braid_loop(const Config& base, int i, int j, int segments) {
    const int n = static_cast<int>(base.size());
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw std::invalid_argument("bad braid generator indices");
    double near = std::numeric_limits<double>::infinity();
    for (int l = 0; l < n; ++l)
        if (l != i) near = std::min(near, std::abs(base[l] - base[i]));
    const Complex u = (base[j] - base[i]) / std::abs(base[j] - base[i]);
    const double r = 0.4 * near;
    const Complex anchor = base[i] + r * u;

    std::vector<Config> path{base};
    Config z = base;
    z[j] = anchor;
    path.push_back(z);
    for (int s = 1; s <= segments; ++s) {
        const double phi = 2 * M_PI * s / segments;
        z[j] = base[i] + r * u * std::polar(1.0, phi);
        path.push_back(z);
    }
    path.back()[j] = anchor;
    path.push_back(base);
    return path;
}

std::vector<Config> rectangle_loop(const Config& base, int i, double w, double h) {
    std::vector<Config> path(5, base);
    path[1][i] += w;
    path[2][i] += Complex(w, h);
    path[3][i] += Complex(0, h);
    return path;
}

std::vector<Config> reverse_path(const std::vector<Config>& path) { return {path.rbegin(), path.rend()}; }

std::vector<Config> concat_paths(const std::vector<Config>& a, const std::vector<Config>& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (config_distance(a.back(), b.front()) > 1e-12) throw std::invalid_argument("paths do not join");
    std::vector<Config> out = a;
    out.insert(out.end(), b.begin() + 1, b.end());
    return out;
}

CurvatureReport rectangle_curvature_general(const ConnectionFn& conn, int dim, const Config& base, int i, double side,
                                            int levels, const TransportOptions& opt) {
    if (levels < 2) throw std::invalid_argument("curvature fit needs at least two levels");
    CurvatureReport rep;
    const CMatrix id = CMatrix::Identity(dim, dim);
    for (int l = 0; l < levels; ++l) {
        const double a = side / std::pow(2.0, l);
        auto res = transport_general(conn, dim, rectangle_loop(base, i, a, a), id, opt);
        rep.levels.push_back({a * a, (res.matrix - id).norm()});
        rep.max_deviation = std::max(rep.max_deviation, rep.levels.back().deviation);
    }
    // least-squares slope of log deviation against log area
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rep.levels.size());
    for (const auto& lv : rep.levels) {
        const double x = std::log(lv.area);
        const double y = std::log(std::max(lv.deviation, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.slope_within = std::abs(rep.slope - 1) <= 0.15;
    return rep;
}

CurvatureReport rectangle_curvature(const KZSystem& sys, const Config& base, int i, double side, int levels,
                                    const TransportOptions& opt) {
    return rectangle_curvature_general([&](const Config& z, const Config& dz) { return sys.along(z, dz); }, sys.dim(),
                                       base, i, side, levels, opt);
}

namespace {

using CState = std::map<TensorIndex, Complex>;

CState apply_complex(const TensorProduct& tp, const SparseOp& op, int factor, const CState& v) {
    CState out;
    for (const auto& [idx, x] : v) {
        const int d = tp.digit(idx, factor);
        for (const auto& [row, y] : op.column(d)) out[tp.with_digit(idx, factor, row)] += x * to_double(y);
    }
    return out;
}

}  // namespace

CMatrix block_subspace(const TensorProduct& tp, const std::vector<InvariantFunctional>& invariants, const Config& z,
                       int level) {
    const int n = tp.size();
    const int ninv = static_cast<int>(invariants.size());
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("one point per weight is required");
    if (ninv == 0) return CMatrix(0, 0);
    const RootSystem& rs = tp.factor(0).root_system();
    const Root& theta = rs.highest_root();
    const int top = static_cast<int>(rs.positive_roots().size()) - 1;
    const auto zero_depth = tp.zero_weight_depth();

    std::vector<Eigen::RowVectorXcd> rows;
    for (int i = 0; i < n; ++i) {
        const Rational lt = rs.inner(tp.factor(i).highest_weight(), theta);
        const int p = level - static_cast<int>(lt.get_num().get_si()) + 1;
        auto src = zero_depth;
        for (int l = 0; l < rs.rank(); ++l) src[l] += p * theta.coords[l];
        for (TensorIndex v : tp.tensors_of_depth(src, i)) {
            CState w{{v, Complex(1)}};
            for (int step = 0; step < p; ++step) {
                CState next;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const Complex c = 1.0 / (z[j] - z[i]);
                    for (const auto& [idx, x] : apply_complex(tp, tp.factor(j).e_root(top), j, w)) next[idx] += c * x;
                }
                w = std::move(next);
            }
            Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(ninv);
            for (const auto& [idx, x] : w) {
                const int q = tp.zero_position(idx);
                if (q < 0) continue;
                for (int c = 0; c < ninv; ++c) row(c) += to_double(invariants[c].coeffs[q]) * x;
            }
            rows.push_back(row);
        }
    }
    if (rows.empty()) return CMatrix::Identity(ninv, ninv);
    CMatrix a(rows.size(), ninv);
    for (std::size_t r = 0; r < rows.size(); ++r) a.row(r) = rows[r];
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    return svd.matrixV().rightCols(ninv - rank);
}

}  // namespace kzu

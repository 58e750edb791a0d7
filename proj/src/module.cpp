#include "kzu/module.hpp"

#include <set>
#include <stdexcept>

namespace kzu {

HighestWeightModule::HighestWeightModule(std::vector<std::vector<int>> pairing, std::vector<Rational> labels,
                                         ModuleOptions options)
    : pairing_(std::move(pairing)), labels_(std::move(labels)), options_(std::move(options)) {
    const int r = rank();
    if (static_cast<int>(pairing_.size()) != r) throw std::invalid_argument("pairing matrix has wrong size");

    std::vector<int> top(r, 0);
    WeightSpace ws{top, labels_, 1, 0};
    spaces_.push_back(ws);
    Local loc;
    loc.f_in.resize(r);
    loc.e_out.resize(r);
    local_.push_back(loc);
    index_[top] = 0;
    dim_ = 1;

    std::set<std::vector<int>> frontier{top};
    while (!frontier.empty()) {
        std::set<std::vector<int>> next;
        for (const auto& n : frontier)
            for (int i = 0; i < r; ++i) {
                auto m = n;
                ++m[i];
                if (options_.keep && !options_.keep(m)) continue;
                next.insert(m);
            }
        frontier.clear();
        for (const auto& m : next)
            if (build_space(m)) frontier.insert(m);
    }

    // assemble global operators
    space_of_.resize(dim_);
    for (std::size_t s = 0; s < spaces_.size(); ++s)
        for (int k = 0; k < spaces_[s].dim; ++k) space_of_[spaces_[s].offset + k] = static_cast<int>(s);
    for (int i = 0; i < r; ++i) {
        SparseOp e(dim_, dim_), f(dim_, dim_), h(dim_, dim_);
        for (std::size_t s = 0; s < spaces_.size(); ++s) {
            const auto& ws = spaces_[s];
            for (int k = 0; k < ws.dim; ++k) h.add(ws.offset + k, ws.offset + k, ws.labels[i]);
            auto up = ws.depth;
            --up[i];
            int src = space_index(up);
            if (src < 0) continue;
            const auto& fin = local_[s].f_in[i];
            const auto& eout = local_[s].e_out[i];
            const int so = spaces_[src].offset;
            for (std::size_t a = 0; a < fin.rows(); ++a)
                for (std::size_t b = 0; b < fin.cols(); ++b) f.add(ws.offset + a, so + b, fin(a, b));
            for (std::size_t a = 0; a < eout.rows(); ++a)
                for (std::size_t b = 0; b < eout.cols(); ++b) e.add(so + a, ws.offset + b, eout(a, b));
        }
        e_.push_back(std::move(e));
        f_.push_back(std::move(f));
        h_.push_back(std::move(h));
    }
}

int HighestWeightModule::space_index(const std::vector<int>& depth) const {
    for (int x : depth)
        if (x < 0) return -1;
    auto it = index_.find(depth);
    return it == index_.end() ? -1 : it->second;
}

bool HighestWeightModule::build_space(const std::vector<int>& n) {
    const int r = rank();
    std::vector<Rational> labels(r);
    for (int i = 0; i < r; ++i) {
        labels[i] = labels_[i];
        for (int l = 0; l < r; ++l) labels[i] -= Rational(n[l] * pairing_[l][i]);
    }

    // targets of the raising maps out of V(n)
    std::vector<int> target(r, -1);
    std::vector<int> comp_offset(r, 0);
    int image_dim = 0;
    for (int j = 0; j < r; ++j) {
        auto m = n;
        --m[j];
        target[j] = space_index(m);
        comp_offset[j] = image_dim;
        if (target[j] >= 0) image_dim += spaces_[target[j]].dim;
    }
    if (image_dim == 0) return false;

    struct Candidate {
        int i;
        int b;
        RatVector image;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < r; ++i) {
        const int src = target[i];  // V(n - e_i)
        if (src < 0) continue;
        const auto& src_space = spaces_[src];
        for (int b = 0; b < src_space.dim; ++b) {
            RatVector img(image_dim);
            for (int j = 0; j < r; ++j) {
                if (target[j] < 0) continue;
                const int off = comp_offset[j];
                // e_j f_i b = f_i e_j b + delta_ij h_i b
                const auto& ej = local_[src].e_out[j];  // V(n-e_i) -> V(n-e_i-e_j)
                if (ej.rows() > 0) {
                    RatVector ejb(ej.rows());
                    for (std::size_t a = 0; a < ej.rows(); ++a) ejb[a] = ej(a, b);
                    const auto& fi = local_[target[j]].f_in[i];  // V(n-e_i-e_j) -> V(n-e_j)
                    if (fi.rows() > 0) {
                        RatVector t = fi * ejb;
                        for (std::size_t a = 0; a < t.size(); ++a) img[off + a] += t[a];
                    }
                }
                if (i == j) img[off + b] += src_space.labels[i];
            }
            cands.push_back({i, b, std::move(img)});
        }
    }

    SpanBuilder span(image_dim);
    std::vector<int> chosen;
    for (std::size_t c = 0; c < cands.size(); ++c)
        if (span.add(cands[c].image)) chosen.push_back(static_cast<int>(c));
    const int d = static_cast<int>(chosen.size());
    if (d == 0) return false;
    if (dim_ + d > options_.max_dim)
        throw std::length_error("module dimension exceeds cap of " + std::to_string(options_.max_dim));

    // express every candidate in the chosen basis: rref of [chosen images | all images]
    RatMatrix aug(image_dim, d + cands.size());
    for (int k = 0; k < d; ++k)
        for (int a = 0; a < image_dim; ++a) aug(a, k) = cands[chosen[k]].image[a];
    for (std::size_t c = 0; c < cands.size(); ++c)
        for (int a = 0; a < image_dim; ++a) aug(a, d + c) = cands[c].image[a];
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) < d || (d > 0 && static_cast<int>(piv[d - 1]) != d - 1))
        throw std::logic_error("module construction: inconsistent basis");

    Local loc;
    loc.f_in.resize(r);
    loc.e_out.resize(r);
    for (int i = 0; i < r; ++i)
        if (target[i] >= 0) loc.f_in[i] = RatMatrix(d, spaces_[target[i]].dim);
    for (std::size_t c = 0; c < cands.size(); ++c)
        for (int k = 0; k < d; ++k) loc.f_in[cands[c].i](k, cands[c].b) = aug(k, d + c);
    for (int j = 0; j < r; ++j) {
        if (target[j] < 0) continue;
        RatMatrix ej(spaces_[target[j]].dim, d);
        for (int k = 0; k < d; ++k)
            for (std::size_t a = 0; a < ej.rows(); ++a) ej(a, k) = cands[chosen[k]].image[comp_offset[j] + a];
        loc.e_out[j] = std::move(ej);
    }

    WeightSpace ws{n, labels, d, dim_};
    index_[n] = static_cast<int>(spaces_.size());
    spaces_.push_back(std::move(ws));
    local_.push_back(std::move(loc));
    dim_ += d;
    return true;
}

}  // namespace kzu

#include "cache.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace kzu::cli {

namespace fs = std::filesystem;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

Json rational_row(const RatVector& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

RatVector rational_row(const Json& a) {
    RatVector v;
    for (const auto& x : a) v.push_back(parse_rational(x.get<std::string>()));
    return v;
}

}  // namespace

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {
    if (enabled()) fs::create_directories(dir_);
}

std::string Cache::key(const std::string& kind, const Json& content) {
    return sha256_hex(std::string(kCacheVersion) + "\n" + kind + "\n" + content.dump());
}

fs::path Cache::path_for(const std::string& kind, const Json& content) const {
    return dir_ / (kind + "-" + key(kind, content) + ".json");
}

std::optional<Json> Cache::load(const std::string& kind, const Json& content) {
    if (!enabled()) return std::nullopt;
    const fs::path p = path_for(kind, content);
    if (!fs::exists(p)) {
        ++misses_;
        return std::nullopt;
    }
    try {
        std::ifstream in(p);
        Json entry = Json::parse(in);
        if (entry.at("version") != kCacheVersion || entry.at("kind") != kind || entry.at("content") != content)
            throw std::runtime_error("entry does not match its key");
        ++hits_;
        return entry.at("payload");
    } catch (const std::exception& e) {
        std::cerr << "warning: corrupt cache entry " << p.string() << " (" << e.what() << "); recomputing\n";
        ++misses_;
        return std::nullopt;
    }
}

void Cache::store(const std::string& kind, const Json& content, const Json& payload) {
    if (!enabled()) return;
    Json entry{{"version", kCacheVersion}, {"kind", kind}, {"content", content}, {"payload", payload}};
    write_atomic(path_for(kind, content), entry.dump());
}

void write_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

Json block_space_to_json(const Instance& inst, const BlockSpace& bs) {
    Json j = inst.describe();
    Json inv = Json::array();
    for (const auto& phi : bs.invariants) inv.push_back(rational_row(phi.coeffs));
    Json m = Json::array();
    for (std::size_t r = 0; r < bs.coords.rows(); ++r) {
        RatVector row;
        for (std::size_t c = 0; c < bs.coords.cols(); ++c) row.push_back(bs.coords(r, c));
        m.push_back(rational_row(row));
    }
    j["invariants"] = inv;
    j["basis_matrix"] = m;
    j["dim"] = bs.dim();
    return j;
}

BlockSpace block_space_from_json(const Instance& inst, const Json& j) {
    if (j.at("algebra") != inst.describe().at("algebra") || j.at("weights") != inst.describe().at("weights") ||
        j.at("level") != inst.level() || j.at("points") != inst.describe().at("points"))
        throw std::runtime_error("cached block space belongs to another instance");
    BlockSpace bs;
    bs.weights = inst.weights();
    bs.points = inst.points();
    bs.level = inst.level();
    for (const auto& row : j.at("invariants")) bs.invariants.push_back({rational_row(row)});
    const auto& m = j.at("basis_matrix");
    const std::size_t n = bs.invariants.size();
    const std::size_t dim = j.at("dim").get<std::size_t>();
    if (m.size() != n) throw std::runtime_error("basis matrix has the wrong number of rows");
    bs.coords = RatMatrix(n, dim);
    for (std::size_t r = 0; r < n; ++r) {
        const RatVector row = rational_row(m[r]);
        if (row.size() != dim) throw std::runtime_error("basis matrix has the wrong number of columns");
        for (std::size_t c = 0; c < dim; ++c) bs.coords(r, c) = row[c];
    }
    const std::size_t zero = inst.tensor().zero_weight().size();
    for (std::size_t b = 0; b < dim; ++b) {
        InvariantFunctional phi{RatVector(zero)};
        for (std::size_t c = 0; c < n; ++c) {
            if (bs.invariants[c].coeffs.size() != zero) throw std::runtime_error("invariant has the wrong length");
            if (sgn(bs.coords(c, b)) == 0) continue;
            for (std::size_t p = 0; p < zero; ++p) phi.coeffs[p] += bs.coords(c, b) * bs.invariants[c].coeffs[p];
        }
        bs.basis.push_back(std::move(phi));
    }
    return bs;
}

}  // namespace kzu::cli

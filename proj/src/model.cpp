#include "potts/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace potts {

ModelParams ModelParams::from_J(int q, int k, double J) {
    ModelParams p;
    p.q = q;
    p.k = k;
    p.J = J;
    p.theta = std::exp(J);
    p.validate();
    return p;
}

ModelParams ModelParams::from_theta(int q, int k, double theta) {
    if (!(theta > 0.0))
        throw std::invalid_argument("theta must be positive, got " + std::to_string(theta));
    ModelParams p;
    p.q = q;
    p.k = k;
    p.theta = theta;
    p.J = std::log(theta);
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (q < 2) throw std::invalid_argument("q must be >= 2, got " + std::to_string(q));
    if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
    if (!(theta > 0.0) || !std::isfinite(J))
        throw std::invalid_argument("non-finite model parameters");
    const double ref = std::exp(J);
    if (std::abs(theta - ref) > 1e-12 * std::max(theta, ref))
        throw std::invalid_argument("theta and J are inconsistent: theta=" +
                                    std::to_string(theta) + " but exp(J)=" + std::to_string(ref));
}

void ModelParams::require_classifiable() const {
    validate();
    if (k != 2)
        throw std::domain_error("classification requires the order-2 tree (k = 2), got k = " +
                                std::to_string(k));
    if (!(J > 0.0))
        throw std::domain_error("classification requires a ferromagnetic coupling (J > 0, theta > 1)");
}

VertexAddr VertexAddr::parent() const {
    if (is_root()) throw std::domain_error("the root vertex has no parent");
    VertexAddr p{path};
    p.path.pop_back();
    return p;
}

VertexAddr VertexAddr::child(int i) const {
    if (i < 1) throw std::invalid_argument("successor index must be >= 1, got " + std::to_string(i));
    VertexAddr c{path};
    c.path.push_back(i);
    return c;
}

std::string VertexAddr::str() const {
    std::string s = "0";
    for (int x : path) {
        s += '.';
        s += std::to_string(x);
    }
    return s;
}

VertexAddr VertexAddr::parse(const std::string& s) {
    VertexAddr v;
    std::size_t pos = 0;
    std::size_t tok = 0;
    while (pos <= s.size()) {
        std::size_t dot = s.find('.', pos);
        if (dot == std::string::npos) dot = s.size();
        const std::string piece = s.substr(pos, dot - pos);
        if (tok == 0) {
            if (piece != "0")
                throw std::invalid_argument("malformed vertex address '" + s +
                                            "': must start with the root token '0'");
        } else {
            if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("malformed vertex address '" + s + "': bad token '" +
                                            piece + "'");
            long val = std::stol(piece);
            if (val < 1)
                throw std::invalid_argument("malformed vertex address '" + s +
                                            "': successor index must be >= 1, got '" + piece + "'");
            v.path.push_back(static_cast<int>(val));
        }
        ++tok;
        if (dot == s.size()) break;
        pos = dot + 1;
    }
    if (tok == 0) throw std::invalid_argument("empty vertex address");
    return v;
}

void validate_address(const ModelParams& p, const VertexAddr& v) {
    for (std::size_t i = 0; i < v.path.size(); ++i) {
        const int hi = (i == 0) ? p.k + 1 : p.k;
        if (v.path[i] < 1 || v.path[i] > hi)
            throw std::invalid_argument("vertex address " + v.str() + ": index " +
                                        std::to_string(v.path[i]) + " at step " + std::to_string(i) +
                                        " outside 1.." + std::to_string(hi));
    }
}

std::vector<VertexAddr> direct_successors(const ModelParams& p, const VertexAddr& v) {
    validate_address(p, v);
    const int deg = v.is_root() ? p.k + 1 : p.k;
    std::vector<VertexAddr> out;
    out.reserve(deg);
    for (int i = 1; i <= deg; ++i) out.push_back(v.child(i));
    return out;
}

namespace {

void collect_ball(const ModelParams& p, VertexAddr& cur, int n, std::vector<VertexAddr>& out) {
    out.push_back(cur);
    if (cur.depth() == n) return;
    const int deg = cur.is_root() ? p.k + 1 : p.k;
    for (int i = 1; i <= deg; ++i) {
        cur.path.push_back(i);
        collect_ball(p, cur, n, out);
        cur.path.pop_back();
    }
}

void collect_sphere(const ModelParams& p, VertexAddr& cur, int n, std::vector<VertexAddr>& out) {
    if (cur.depth() == n) {
        out.push_back(cur);
        return;
    }
    const int deg = cur.is_root() ? p.k + 1 : p.k;
    for (int i = 1; i <= deg; ++i) {
        cur.path.push_back(i);
        collect_sphere(p, cur, n, out);
        cur.path.pop_back();
    }
}

}  // namespace

std::vector<VertexAddr> ball(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("ball radius must be >= 0");
    p.validate();
    std::vector<VertexAddr> out;
    out.reserve(static_cast<std::size_t>(ball_size(p, n)));
    VertexAddr root;
    collect_ball(p, root, n, out);
    return out;
}

std::vector<VertexAddr> sphere(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("sphere radius must be >= 0");
    p.validate();
    std::vector<VertexAddr> out;
    out.reserve(static_cast<std::size_t>(sphere_size(p, n)));
    VertexAddr root;
    collect_sphere(p, root, n, out);
    return out;
}

std::uint64_t ball_size(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("ball radius must be >= 0");
    if (p.k == 1) return 1 + 2ull * static_cast<std::uint64_t>(n);
    // 1 + (k+1)(k^n - 1)/(k-1)
    std::uint64_t kn = 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / (p.k + 1);
    for (int i = 0; i < n; ++i) {
        if (kn > limit / p.k) throw std::overflow_error("ball size overflows 64 bits");
        kn *= static_cast<std::uint64_t>(p.k);
    }
    return 1 + static_cast<std::uint64_t>(p.k + 1) * (kn - 1) / static_cast<std::uint64_t>(p.k - 1);
}

std::uint64_t sphere_size(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("sphere radius must be >= 0");
    if (n == 0) return 1;
    std::uint64_t s = static_cast<std::uint64_t>(p.k) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / p.k;
    for (int i = 1; i < n; ++i) {
        if (s > limit) throw std::overflow_error("sphere size overflows 64 bits");
        s *= static_cast<std::uint64_t>(p.k);
    }
    return s;
}

VertexAddr rotate(const VertexAddr& v, int i, int j) {
    VertexAddr w = v;
    if (!w.path.empty()) {
        if (w.path[0] == i)
            w.path[0] = j;
        else if (w.path[0] == j)
            w.path[0] = i;
    }
    return w;
}

Color Configuration::at(const VertexAddr& v) const {
    auto it = assign.find(v);
    if (it == assign.end())
        throw std::out_of_range("configuration has no colour for vertex " + v.str());
    return it->second;
}

void validate_configuration(const ModelParams& p, const Configuration& sigma,
                            const std::vector<VertexAddr>& domain) {
    for (const auto& v : domain) {
        const Color c = sigma.at(v);
        if (c < 1 || c > p.q)
            throw std::invalid_argument("colour " + std::to_string(c) + " at vertex " + v.str() +
                                        " outside 1.." + std::to_string(p.q));
    }
}

}  // namespace potts

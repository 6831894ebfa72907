#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace potts {

using Color = int;  // colours are 1..q throughout

/// Parameters of the q-state Potts model on the Cayley tree of order k:
/// the root has k+1 direct successors, every other vertex has k.  The weight
/// variable theta = e^J is carried alongside the coupling J and the two must
/// stay consistent (relative tolerance 1e-12).
struct ModelParams {
    int q = 2;
    int k = 2;
    double J = 0.0;
    double theta = 1.0;

    static ModelParams from_J(int q, int k, double J);
    static ModelParams from_theta(int q, int k, double theta);

    /// q >= 2, k >= 1, theta consistent with e^J.
    void validate() const;

    /// The splitting-measure classification is developed for the ferromagnetic
    /// model on the order-2 tree only; reject anything else.
    void require_classifiable() const;
};

/// Address of a tree vertex: the path of successor indices from the root.
/// The root is the empty path and serializes as "0"; successor 2 of the root
/// followed by successor 1 serializes as "0.2.1".  The first step ranges over
/// 1..k+1, every later step over 1..k.
struct VertexAddr {
    std::vector<int> path;

    int depth() const { return static_cast<int>(path.size()); }
    bool is_root() const { return path.empty(); }
    VertexAddr parent() const;       // error on the root
    VertexAddr child(int i) const;   // append a successor index

    std::string str() const;
    static VertexAddr parse(const std::string& s);

    auto operator<=>(const VertexAddr&) const = default;
};

/// Check that every successor index of v lies in its admissible range.
void validate_address(const ModelParams& p, const VertexAddr& v);

/// Direct successors of v: k+1 of them for the root, k otherwise.
std::vector<VertexAddr> direct_successors(const ModelParams& p, const VertexAddr& v);

/// Ball V_n = all vertices at distance <= n from the root, in lexicographic
/// (depth-first preorder) order.
std::vector<VertexAddr> ball(const ModelParams& p, int n);

/// Sphere A_n = vertices at distance exactly n, lexicographic order.
std::vector<VertexAddr> sphere(const ModelParams& p, int n);

/// |V_n| = 1 + (k+1)(k^n - 1)/(k - 1) for k >= 2, and 1 + 2n for k = 1.
std::uint64_t ball_size(const ModelParams& p, int n);

/// |A_n| = (k+1) k^(n-1) for n >= 1, and 1 for n = 0.
std::uint64_t sphere_size(const ModelParams& p, int n);

/// The rotation that swaps the root subtrees i and j and fixes the rest.
VertexAddr rotate(const VertexAddr& v, int i, int j);

/// A spin configuration on an explicit finite vertex set.  Lookups outside
/// the domain are errors, never defaults.
struct Configuration {
    std::map<VertexAddr, Color> assign;

    bool contains(const VertexAddr& v) const { return assign.count(v) != 0; }
    Color at(const VertexAddr& v) const;  // throws std::out_of_range naming the vertex
    void set(const VertexAddr& v, Color c) { assign[v] = c; }
    std::size_t size() const { return assign.size(); }
};

/// Check that sigma assigns a colour in 1..q to every vertex of `domain`.
void validate_configuration(const ModelParams& p, const Configuration& sigma,
                            const std::vector<VertexAddr>& domain);

}  // namespace potts

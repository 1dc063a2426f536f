#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cliquelab {

// A (hyper)edge: strictly increasing vertex ids from 1..n.
using Edge = std::vector<int>;

// Vertex-membership bitset; supports n <= kMaxVertices.
inline constexpr int kMaxVertices = 256;

struct VertexMask {
    std::array<uint64_t, 4> w{};

    void set(int v) { w[(v - 1) >> 6] |= 1ULL << ((v - 1) & 63); }
    bool test(int v) const { return (w[(v - 1) >> 6] >> ((v - 1) & 63)) & 1; }

    int popcount() const;
    int and_count(const VertexMask& o) const;

    static VertexMask of(const Edge& e) {
        VertexMask m;
        for (int v : e) m.set(v);
        return m;
    }
};

int intersection_size(const Edge& a, const Edge& b);

// Immutable r-uniform hypergraph on [n]. Doubles as a plain graph when
// arity == 2. Edges are kept deduplicated and in lexicographic order so that
// iteration, serialization and everything downstream is deterministic.
class UniformHypergraph {
  public:
    UniformHypergraph(int n, int arity, std::vector<Edge> edges);

    static UniformHypergraph empty(int n, int arity) { return UniformHypergraph(n, arity, {}); }

    int n() const { return n_; }
    int arity() const { return arity_; }
    size_t size() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(size_t i) const { return edges_[i]; }

    bool contains(const Edge& e) const;
    int degree(int v) const;
    std::vector<int> degrees() const;

    const std::vector<VertexMask>& masks() const { return masks_; }

    // Line-based text format: header "n k", one edge per line.
    std::string to_text() const;
    static UniformHypergraph from_text(std::istream& in);
    static UniformHypergraph from_text(const std::string& s);

    std::string to_json() const;
    static UniformHypergraph from_json(const std::string& s);

    bool operator==(const UniformHypergraph& o) const {
        return n_ == o.n_ && arity_ == o.arity_ && edges_ == o.edges_;
    }

  private:
    int n_;
    int arity_;
    std::vector<Edge> edges_;
    std::vector<VertexMask> masks_;
};

}  // namespace cliquelab

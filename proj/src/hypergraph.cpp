#include "cliquelab/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cliquelab {

int VertexMask::popcount() const {
    int c = 0;
    for (uint64_t x : w) c += std::popcount(x);
    return c;
}

int VertexMask::and_count(const VertexMask& o) const {
    int c = 0;
    for (size_t i = 0; i < w.size(); ++i) c += std::popcount(w[i] & o.w[i]);
    return c;
}

int intersection_size(const Edge& a, const Edge& b) {
    int c = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++c;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return c;
}

UniformHypergraph::UniformHypergraph(int n, int arity, std::vector<Edge> edges)
    : n_(n), arity_(arity), edges_(std::move(edges)) {
    if (n < 1 || n > kMaxVertices) throw std::invalid_argument("vertex count out of range");
    if (arity < 2) throw std::invalid_argument("arity must be at least 2");
    if (arity > n) throw std::invalid_argument("arity exceeds vertex count");
    for (auto& e : edges_) {
        if (static_cast<int>(e.size()) != arity_) throw std::invalid_argument("edge has wrong arity");
        std::sort(e.begin(), e.end());
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 1 || e[i] > n_) throw std::invalid_argument("vertex id out of range");
            if (i > 0 && e[i] == e[i - 1]) throw std::invalid_argument("edge has repeated vertex");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    masks_.reserve(edges_.size());
    for (const auto& e : edges_) masks_.push_back(VertexMask::of(e));
}

bool UniformHypergraph::contains(const Edge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

int UniformHypergraph::degree(int v) const {
    int d = 0;
    for (const auto& m : masks_)
        if (m.test(v)) ++d;
    return d;
}

std::vector<int> UniformHypergraph::degrees() const {
    std::vector<int> d(n_ + 1, 0);
    for (const auto& e : edges_)
        for (int v : e) ++d[v];
    return d;
}

std::string UniformHypergraph::to_text() const {
    std::ostringstream out;
    out << n_ << ' ' << arity_ << '\n';
    for (const auto& e : edges_) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (i) out << ' ';
            out << e[i];
        }
        out << '\n';
    }
    return out.str();
}

UniformHypergraph UniformHypergraph::from_text(std::istream& in) {
    int n = 0, k = 0;
    if (!(in >> n >> k)) throw std::invalid_argument("bad hypergraph header");
    std::vector<Edge> edges;
    Edge e(k);
    while (in >> e[0]) {
        for (int i = 1; i < k; ++i)
            if (!(in >> e[i])) throw std::invalid_argument("truncated edge line");
        edges.push_back(e);
    }
    return UniformHypergraph(n, k, std::move(edges));
}

UniformHypergraph UniformHypergraph::from_text(const std::string& s) {
    std::istringstream in(s);
    return from_text(in);
}

std::string UniformHypergraph::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["arity"] = arity_;
    j["edges"] = edges_;
    return j.dump();
}

UniformHypergraph UniformHypergraph::from_json(const std::string& s) {
    auto j = nlohmann::json::parse(s);
    return UniformHypergraph(j.at("n").get<int>(), j.at("arity").get<int>(),
                             j.at("edges").get<std::vector<Edge>>());
}

}  // namespace cliquelab

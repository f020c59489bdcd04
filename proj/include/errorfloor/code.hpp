#ifndef ERRORFLOOR_CODE_HPP
#define ERRORFLOOR_CODE_HPP

#include <iosfwd>
#include <map>
#include <atomic>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ef {

// Thrown on malformed alist input; message carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(int line, const std::string& what)
        : std::runtime_error("alist line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }
private:
    int line_;
};

// Support of a length-n bit vector, kept as sorted unique 0-based indices.
struct BitPattern {
    std::vector<int> support;
    int n = 0;

    BitPattern() = default;
    BitPattern(std::vector<int> s, int len);

    int weight() const { return static_cast<int>(support.size()); }
    bool empty() const { return support.empty(); }
    bool contains(int v) const;
    bool operator==(const BitPattern& o) const { return n == o.n && support == o.support; }
};

// (a,b) trapping-set class with edge/check bookkeeping.
struct TsClass {
    int a = 0;              // support weight
    int b = 0;              // syndrome weight
    int edges = 0;          // sum of variable degrees over the support
    int checks_touched = 0; // checks with at least one edge into the support
    bool elementary = false;
};

// Breadth-first neighborhood of one variable node, used to build impulse
// supports.  tier1_sets holds, per root-check branch, the other d_c-1
// variables.  For depth 2, tier2_branches[i] lists, for the i-th tier-1
// variable in flattened order, the variable sets under each of its
// non-tree checks.
struct NeighborTree {
    int root = 0;
    std::vector<std::vector<int>> tier1_sets;
    std::vector<int> tier1_flat;                          // flattened tier1_sets order
    std::vector<std::vector<std::vector<int>>> tier2_branches;
    std::vector<int> tier2_variables;                     // de-duplicated union
    bool duplicates_present = false;
};

// Immutable parity-check matrix plus Tanner-graph adjacency.
class TannerCode {
public:
    static constexpr int kAcyclic = 0;  // girth value when the graph has no cycle

    TannerCode(int n, int m, std::vector<std::vector<int>> col_adj);

    int n() const { return n_; }
    int m() const { return m_; }
    int k() const { return n_ - m_; }

    const std::vector<std::vector<int>>& col_adjacency() const { return col_adj_; }
    const std::vector<std::vector<int>>& row_adjacency() const { return row_adj_; }
    int var_degree(int v) const { return static_cast<int>(col_adj_[v].size()); }
    int check_degree(int c) const { return static_cast<int>(row_adj_[c].size()); }
    const std::map<int, int>& dv_profile() const { return dv_profile_; }
    const std::map<int, int>& dc_profile() const { return dc_profile_; }
    bool regular() const { return dv_profile_.size() == 1 && dc_profile_.size() == 1; }

    int num_edges() const { return num_edges_; }
    // edge id of (check c, k-th variable in row_adj[c]); ids are contiguous per row
    int row_edge_base(int c) const { return row_edge_base_[c]; }
    // per variable: (check, edge id) pairs matching col_adjacency order
    const std::vector<std::pair<int, int>>& var_edges(int v) const { return var_edges_[v]; }

    // Shortest cycle length, even and >= 4, or kAcyclic.  Computed once, cached.
    int girth() const;

private:
    int n_, m_;
    std::vector<std::vector<int>> col_adj_, row_adj_;
    std::map<int, int> dv_profile_, dc_profile_;
    int num_edges_ = 0;
    std::vector<int> row_edge_base_;
    std::vector<std::vector<std::pair<int, int>>> var_edges_;

    // copyable atomic cache; recomputation races are benign (idempotent)
    struct GirthCache {
        std::atomic<int> value{-2};
        GirthCache() = default;
        GirthCache(const GirthCache& o) : value(o.value.load()) {}
        GirthCache& operator=(const GirthCache& o) {
            value = o.value.load();
            return *this;
        }
    };
    mutable GirthCache girth_;
};

TannerCode parse_alist(std::istream& in);
TannerCode parse_alist_file(const std::string& path);
void write_alist(const TannerCode& code, std::ostream& out);  // unpadded dialect

// Checks with an odd number of edges into x.support, plus their count.
std::pair<std::vector<int>, int> syndrome(const TannerCode& code, const BitPattern& x);

TsClass classify_pattern(const TannerCode& code, const BitPattern& x);

int compute_girth(const TannerCode& code);

NeighborTree build_neighbor_tree(const TannerCode& code, int root, int depth);

// Variables sorted ascending by degree, stable by index.
std::vector<int> search_order(const TannerCode& code);

// GF(2) rank of H; optional diagnostic, k is reported as n-m elsewhere.
int gf2_rank(const TannerCode& code);

}  // namespace ef

#endif

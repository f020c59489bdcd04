#include "errorfloor/code.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ef {

BitPattern::BitPattern(std::vector<int> s, int len) : support(std::move(s)), n(len) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (int v : support) {
        if (v < 0 || v >= n) throw std::invalid_argument("BitPattern index out of range");
    }
}

bool BitPattern::contains(int v) const {
    return std::binary_search(support.begin(), support.end(), v);
}

TannerCode::TannerCode(int n, int m, std::vector<std::vector<int>> col_adj)
    : n_(n), m_(m), col_adj_(std::move(col_adj)) {
    if (n_ <= 0 || m_ <= 0) throw std::invalid_argument("empty code");
    if (static_cast<int>(col_adj_.size()) != n_)
        throw std::invalid_argument("column adjacency size mismatch");

    row_adj_.assign(m_, {});
    for (int v = 0; v < n_; ++v) {
        auto& cks = col_adj_[v];
        std::sort(cks.begin(), cks.end());
        if (std::adjacent_find(cks.begin(), cks.end()) != cks.end())
            throw std::invalid_argument("duplicate edge at variable " + std::to_string(v));
        if (cks.empty()) throw std::invalid_argument("degree-0 variable " + std::to_string(v));
        for (int c : cks) {
            if (c < 0 || c >= m_) throw std::invalid_argument("check index out of range");
            row_adj_[c].push_back(v);
        }
    }
    for (int c = 0; c < m_; ++c) {
        if (row_adj_[c].empty()) throw std::invalid_argument("degree-0 check " + std::to_string(c));
        std::sort(row_adj_[c].begin(), row_adj_[c].end());
    }

    for (int v = 0; v < n_; ++v) dv_profile_[var_degree(v)]++;
    for (int c = 0; c < m_; ++c) dc_profile_[check_degree(c)]++;

    row_edge_base_.resize(m_);
    int e = 0;
    for (int c = 0; c < m_; ++c) {
        row_edge_base_[c] = e;
        e += check_degree(c);
    }
    num_edges_ = e;
    var_edges_.assign(n_, {});
    for (int c = 0; c < m_; ++c) {
        for (int k = 0; k < check_degree(c); ++k)
            var_edges_[row_adj_[c][k]].emplace_back(c, row_edge_base_[c] + k);
    }
}

int TannerCode::girth() const {
    int g = girth_.value.load(std::memory_order_relaxed);
    if (g == -2) {
        g = compute_girth(*this);
        girth_.value.store(g, std::memory_order_relaxed);
    }
    return g;
}

namespace {

// Reads one line of whitespace-separated ints; throws parse_error on garbage.
std::vector<int> read_int_line(std::istream& in, int& line_no, bool required) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::vector<int> out;
        int x;
        while (ss >> x) out.push_back(x);
        std::string rest;
        if (ss.clear(), ss >> rest)
            throw parse_error(line_no, "non-integer token '" + rest + "'");
        if (!out.empty()) return out;
        // blank lines between sections are tolerated
    }
    if (required) throw parse_error(line_no + 1, "unexpected end of file");
    return {};
}

}  // namespace

TannerCode parse_alist(std::istream& in) {
    int line_no = 0;
    auto head = read_int_line(in, line_no, true);
    if (head.size() != 2) throw parse_error(line_no, "expected 'n m'");
    int n = head[0], m = head[1];
    if (n <= 0 || m <= 0) throw parse_error(line_no, "nonpositive dimensions");

    auto maxdeg = read_int_line(in, line_no, true);
    if (maxdeg.size() != 2) throw parse_error(line_no, "expected 'max_dv max_dc'");
    int max_dv = maxdeg[0], max_dc = maxdeg[1];

    auto col_deg = read_int_line(in, line_no, true);
    if (static_cast<int>(col_deg.size()) != n)
        throw parse_error(line_no, "expected " + std::to_string(n) + " column degrees");
    auto row_deg = read_int_line(in, line_no, true);
    if (static_cast<int>(row_deg.size()) != m)
        throw parse_error(line_no, "expected " + std::to_string(m) + " row degrees");
    for (int v = 0; v < n; ++v)
        if (col_deg[v] < 1 || col_deg[v] > max_dv)
            throw parse_error(line_no, "column degree out of declared range");
    for (int c = 0; c < m; ++c)
        if (row_deg[c] < 1 || row_deg[c] > max_dc)
            throw parse_error(line_no, "row degree out of declared range");

    std::vector<std::vector<int>> col_adj(n);
    for (int v = 0; v < n; ++v) {
        auto entries = read_int_line(in, line_no, true);
        for (int c1 : entries) {
            if (c1 == 0) continue;  // zero padding
            if (c1 < 0 || c1 > m) throw parse_error(line_no, "check index out of range");
            col_adj[v].push_back(c1 - 1);
        }
        if (static_cast<int>(col_adj[v].size()) != col_deg[v])
            throw parse_error(line_no, "column " + std::to_string(v + 1) +
                                           " entry count disagrees with its degree");
    }

    std::vector<std::vector<int>> row_adj(m);
    for (int c = 0; c < m; ++c) {
        auto entries = read_int_line(in, line_no, true);
        for (int v1 : entries) {
            if (v1 == 0) continue;
            if (v1 < 0 || v1 > n) throw parse_error(line_no, "variable index out of range");
            row_adj[c].push_back(v1 - 1);
        }
        if (static_cast<int>(row_adj[c].size()) != row_deg[c])
            throw parse_error(line_no, "row " + std::to_string(c + 1) +
                                           " entry count disagrees with its degree");
    }

    TannerCode code(n, m, col_adj);

    // transpose consistency against the row section
    for (int c = 0; c < m; ++c) {
        auto declared = row_adj[c];
        std::sort(declared.begin(), declared.end());
        if (std::adjacent_find(declared.begin(), declared.end()) != declared.end())
            throw parse_error(line_no, "duplicate edge in row " + std::to_string(c + 1));
        if (declared != code.row_adjacency()[c])
            throw parse_error(line_no, "row section disagrees with column section (row " +
                                           std::to_string(c + 1) + ")");
    }
    return code;
}

TannerCode parse_alist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_alist(in);
}

void write_alist(const TannerCode& code, std::ostream& out) {
    int max_dv = code.dv_profile().rbegin()->first;
    int max_dc = code.dc_profile().rbegin()->first;
    out << code.n() << ' ' << code.m() << '\n';
    out << max_dv << ' ' << max_dc << '\n';
    for (int v = 0; v < code.n(); ++v) out << code.var_degree(v) << (v + 1 < code.n() ? ' ' : '\n');
    for (int c = 0; c < code.m(); ++c) out << code.check_degree(c) << (c + 1 < code.m() ? ' ' : '\n');
    for (int v = 0; v < code.n(); ++v) {
        const auto& cks = code.col_adjacency()[v];
        for (size_t i = 0; i < cks.size(); ++i) out << cks[i] + 1 << (i + 1 < cks.size() ? ' ' : '\n');
    }
    for (int c = 0; c < code.m(); ++c) {
        const auto& vs = code.row_adjacency()[c];
        for (size_t i = 0; i < vs.size(); ++i) out << vs[i] + 1 << (i + 1 < vs.size() ? ' ' : '\n');
    }
}

std::pair<std::vector<int>, int> syndrome(const TannerCode& code, const BitPattern& x) {
    if (x.n != code.n()) throw std::invalid_argument("pattern length mismatch");
    std::vector<int> parity(code.m(), 0);
    for (int v : x.support)
        for (int c : code.col_adjacency()[v]) parity[c] ^= 1;
    std::vector<int> unsat;
    for (int c = 0; c < code.m(); ++c)
        if (parity[c]) unsat.push_back(c);
    return {unsat, static_cast<int>(unsat.size())};
}

TsClass classify_pattern(const TannerCode& code, const BitPattern& x) {
    if (x.n != code.n()) throw std::invalid_argument("pattern length mismatch");
    std::vector<int> touch(code.m(), 0);
    TsClass cls;
    cls.a = x.weight();
    for (int v : x.support) {
        cls.edges += code.var_degree(v);
        for (int c : code.col_adjacency()[v]) touch[c]++;
    }
    cls.elementary = true;
    for (int c = 0; c < code.m(); ++c) {
        if (touch[c] == 0) continue;
        cls.checks_touched++;
        if (touch[c] % 2 == 1) {
            cls.b++;
            if (touch[c] != 1) cls.elementary = false;
        } else {
            if (touch[c] != 2) cls.elementary = false;
        }
    }
    return cls;
}

int compute_girth(const TannerCode& code) {
    // BFS from every variable node over the bipartite graph.  Nodes are
    // 0..n-1 for variables, n..n+m-1 for checks.  For bipartite graphs the
    // minimum over all roots of dist[u]+dist[v]+1 for a non-tree edge is the
    // exact girth.
    const int n = code.n(), m = code.m();
    const int total = n + m;
    int best = std::numeric_limits<int>::max();
    std::vector<int> dist(total), parent(total);
    std::deque<int> queue;

    auto neighbors = [&](int u) -> const std::vector<int>& {
        return u < n ? code.col_adjacency()[u] : code.row_adjacency()[u - n];
    };
    auto to_node = [&](int u, int nb) { return u < n ? nb + n : nb; };

    for (int root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[root] = 0;
        parent[root] = -1;
        queue.clear();
        queue.push_back(root);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (2 * dist[u] + 1 >= best) continue;
            for (int nb : neighbors(u)) {
                int w = to_node(u, nb);
                if (w == parent[u]) continue;
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else {
                    best = std::min(best, dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if (best == std::numeric_limits<int>::max()) return TannerCode::kAcyclic;
    // parallel edges are rejected at construction, so any cycle has length >= 4
    return best + (best % 2);  // bipartite cycles are even; odd candidate means u,v at equal depth
}

NeighborTree build_neighbor_tree(const TannerCode& code, int root, int depth) {
    if (root < 0 || root >= code.n()) throw std::invalid_argument("root out of range");
    if (depth != 1 && depth != 2) throw std::invalid_argument("depth must be 1 or 2");

    NeighborTree tree;
    tree.root = root;
    std::vector<char> seen_var(code.n(), 0);
    seen_var[root] = 1;
    std::vector<char> tree_check(code.m(), 0);

    for (int c : code.col_adjacency()[root]) {
        tree_check[c] = 1;
        std::vector<int> branch;
        for (int v : code.row_adjacency()[c]) {
            if (v == root) continue;
            if (seen_var[v]) {
                tree.duplicates_present = true;
                continue;
            }
            seen_var[v] = 1;
            branch.push_back(v);
        }
        tree.tier1_sets.push_back(std::move(branch));
    }
    for (const auto& s : tree.tier1_sets)
        tree.tier1_flat.insert(tree.tier1_flat.end(), s.begin(), s.end());

    if (depth == 2) {
        std::vector<char> seen2(code.n(), 0);
        for (int t1 : tree.tier1_flat) {
            std::vector<std::vector<int>> branches;
            for (int c : code.col_adjacency()[t1]) {
                if (tree_check[c]) continue;  // edge back toward the root tier
                std::vector<int> branch;
                for (int v : code.row_adjacency()[c]) {
                    if (v == t1) continue;
                    branch.push_back(v);
                    if (!seen_var[v] && !seen2[v]) {
                        seen2[v] = 1;
                        tree.tier2_variables.push_back(v);
                    }
                }
                branches.push_back(std::move(branch));
            }
            tree.tier2_branches.push_back(std::move(branches));
        }
        std::sort(tree.tier2_variables.begin(), tree.tier2_variables.end());
    }
    return tree;
}

std::vector<int> search_order(const TannerCode& code) {
    std::vector<int> order(code.n());
    for (int v = 0; v < code.n(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return code.var_degree(a) < code.var_degree(b); });
    return order;
}

int gf2_rank(const TannerCode& code) {
    const int n = code.n(), m = code.m();
    const int words = (n + 63) / 64;
    std::vector<std::vector<uint64_t>> rows(m, std::vector<uint64_t>(words, 0));
    for (int c = 0; c < m; ++c)
        for (int v : code.row_adjacency()[c]) rows[c][v / 64] |= 1ull << (v % 64);

    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int r = rank; r < m; ++r) {
            if (rows[r][col / 64] >> (col % 64) & 1) {
                piv = r;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < m; ++r) {
            if (r != rank && (rows[r][col / 64] >> (col % 64) & 1))
                for (int w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
        }
        ++rank;
    }
    return rank;
}

}  // namespace ef

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "hypack/errors.hpp"
#include "hypack/rational_lp.hpp"
#include "hypack/shift.hpp"

namespace hypack {

namespace {

// Dinic max-flow on integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

    std::size_t add_edge(std::size_t u, std::size_t v, long cap) {
        adj_[u].push_back(arcs_.size());
        arcs_.push_back({v, cap});
        adj_[v].push_back(arcs_.size());
        arcs_.push_back({u, 0});
        return arcs_.size() - 2;
    }
    long flow_on(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

    long run(std::size_t s, std::size_t t) {
        long total = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (long f = dfs(s, t, std::numeric_limits<long>::max())) total += f;
        }
        return total;
    }

private:
    struct Arc {
        std::size_t to;
        long cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t a : adj_[u])
                if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[u] + 1;
                    q.push(arcs_[a].to);
                }
        }
        return level_[t] >= 0;
    }

    long dfs(std::size_t u, std::size_t t, long f) {
        if (u == t) return f;
        for (std::size_t& j = it_[u]; j < adj_[u].size(); ++j) {
            Arc& arc = arcs_[adj_[u][j]];
            if (arc.cap <= 0 || level_[arc.to] != level_[u] + 1) continue;
            if (long got = dfs(arc.to, t, std::min(f, arc.cap))) {
                arc.cap -= got;
                arcs_[adj_[u][j] ^ 1].cap += got;
                return got;
            }
        }
        return 0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
    std::vector<long> level_;
    std::vector<std::size_t> it_;
};

struct Support {
    std::vector<Pattern> verts;
    std::map<Pattern, std::size_t> index;
    std::vector<mpq_class> target;
    struct Edge {
        const EdgePattern* key;
        std::size_t u, v;
    };
    std::vector<std::vector<Edge>> edges;  // per generator, positive-weight edges only
};

Support make_support(const CylinderWeights& w) {
    Support s;
    for (const auto& [p, x] : w.vertex_w) {
        s.index[p] = s.verts.size();
        s.verts.push_back(p);
        s.target.push_back(x);
    }
    s.edges.resize(static_cast<std::size_t>(w.n));
    for (const auto& [e, x] : w.edge_w) {
        if (sgn(x) <= 0) continue;
        auto su = s.index.find(e.source), sv = s.index.find(e.target);
        if (su == s.index.end() || sv == s.index.end()) continue;
        s.edges[static_cast<std::size_t>(e.i - 1)].push_back({&e, su->second, sv->second});
    }
    return s;
}

CylinderWeights assemble(const CylinderWeights& w, const Support& s, const std::vector<mpq_class>& vert,
                         const std::vector<std::vector<mpq_class>>& flow) {
    CylinderWeights out;
    out.n = w.n;
    out.r = w.r;
    out.K = w.K;
    out.exact = true;
    for (std::size_t j = 0; j < s.verts.size(); ++j)
        if (sgn(vert[j]) > 0) out.vertex_w[s.verts[j]] = vert[j];
    // Zero input edges are carried over as explicit zeros.
    for (const auto& [e, x] : w.edge_w)
        if (sgn(x) == 0) out.edge_w[e] = 0;
    for (std::size_t i = 0; i < s.edges.size(); ++i)
        for (std::size_t j = 0; j < s.edges[i].size(); ++j)
            if (sgn(flow[i][j]) > 0) out.edge_w[*s.edges[i][j].key] = flow[i][j];
    return out;
}

mpq_class max_deviation(const Support& s, const std::vector<mpq_class>& vert) {
    mpq_class worst;
    for (std::size_t j = 0; j < s.verts.size(); ++j) {
        const mpq_class d = abs(vert[j] - s.target[j]);
        if (d > worst) worst = d;
    }
    return worst;
}

// Largest-remainder rounding of target * D to integers summing to D.
std::vector<long> round_to(const Support& s, long D) {
    const std::size_t m = s.verts.size();
    std::vector<long> y(m);
    std::vector<std::pair<mpq_class, std::size_t>> rem;
    long used = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const mpq_class scaled = s.target[j] * D;
        const mpz_class fl = scaled.get_num() / scaled.get_den();
        y[j] = fl.get_si();
        used += y[j];
        rem.push_back({scaled - mpq_class(fl), j});
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t t = 0; used < D && t < rem.size(); ++t) {
        if (sgn(s.target[rem[t].second]) == 0) continue;
        ++y[rem[t].second];
        ++used;
    }
    return y;
}

bool try_rounding(const CylinderWeights& w, const Support& s, long D, const mpq_class& eps,
                  CylinderWeights& result) {
    const std::size_t m = s.verts.size();
    std::vector<long> y = round_to(s, D);
    std::vector<std::vector<long>> flow(s.edges.size());
    for (int guard = 0; guard < 100000; ++guard) {
        std::vector<long> next = y;
        for (std::size_t i = 0; i < s.edges.size(); ++i) {
            // Bipartite transportation: source -> u (y_u) -> v (edges) -> sink (y_v).
            MaxFlow mf(2 * m + 2);
            const std::size_t src = 2 * m, snk = 2 * m + 1;
            std::vector<std::size_t> out_arc(m), in_arc(m), edge_arc;
            for (std::size_t u = 0; u < m; ++u) {
                out_arc[u] = mf.add_edge(src, u, y[u]);
                in_arc[u] = mf.add_edge(m + u, snk, y[u]);
            }
            for (const auto& e : s.edges[i])
                edge_arc.push_back(mf.add_edge(e.u, m + e.v, std::numeric_limits<long>::max() / 4));
            mf.run(src, snk);
            flow[i].resize(edge_arc.size());
            for (std::size_t j = 0; j < edge_arc.size(); ++j) flow[i][j] = mf.flow_on(edge_arc[j]);
            for (std::size_t u = 0; u < m; ++u)
                next[u] = std::min({next[u], mf.flow_on(out_arc[u]), mf.flow_on(in_arc[u])});
        }
        if (next == y) break;
        y = std::move(next);
    }
    long total = 0;
    for (long v : y) total += v;
    if (total == 0) return false;
    std::vector<mpq_class> vert(m);
    for (std::size_t j = 0; j < m; ++j) {
        vert[j] = mpq_class(y[j], total);
        vert[j].canonicalize();
    }
    if (max_deviation(s, vert) >= eps) return false;
    std::vector<std::vector<mpq_class>> fq(s.edges.size());
    for (std::size_t i = 0; i < s.edges.size(); ++i)
        for (long f : flow[i]) {
            fq[i].push_back(mpq_class(f, total));
            fq[i].back().canonicalize();
        }
    result = assemble(w, s, vert, fq);
    return true;
}

CylinderWeights solve_by_lp(const CylinderWeights& w, const Support& s, const mpq_class& eps) {
    const std::size_t m = s.verts.size();
    // Targets on a grid of mesh well below eps keep the LP's denominators small.
    const long D = static_cast<long>(std::ceil(8.0 / eps.get_d()));
    std::vector<long> y = round_to(s, D);
    std::vector<mpq_class> tgt(m);
    for (std::size_t j = 0; j < m; ++j) {
        tgt[j] = mpq_class(y[j], D);
        tgt[j].canonicalize();
    }
    RationalLp lp;
    std::vector<std::size_t> xv(m);
    for (auto& x : xv) x = lp.add_var();
    std::vector<std::vector<std::size_t>> xe(s.edges.size());
    for (std::size_t i = 0; i < s.edges.size(); ++i)
        for (std::size_t j = 0; j < s.edges[i].size(); ++j) xe[i].push_back(lp.add_var());
    const std::size_t t = lp.add_var();
    lp.objective.assign(lp.num_vars, 0);
    lp.objective[t] = 1;
    std::vector<std::pair<std::size_t, mpq_class>> norm;
    for (auto x : xv) norm.push_back({x, 1});
    lp.add_row(norm, RationalLp::Rel::eq, 1);
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
        std::vector<std::vector<std::pair<std::size_t, mpq_class>>> out(m), in(m);
        for (std::size_t u = 0; u < m; ++u) {
            out[u].push_back({xv[u], -1});
            in[u].push_back({xv[u], -1});
        }
        for (std::size_t j = 0; j < s.edges[i].size(); ++j) {
            out[s.edges[i][j].u].push_back({xe[i][j], 1});
            in[s.edges[i][j].v].push_back({xe[i][j], 1});
        }
        for (std::size_t u = 0; u < m; ++u) {
            lp.add_row(out[u], RationalLp::Rel::eq, 0);
            lp.add_row(in[u], RationalLp::Rel::eq, 0);
        }
    }
    for (std::size_t u = 0; u < m; ++u) {
        lp.add_row({{xv[u], 1}, {t, -1}}, RationalLp::Rel::le, tgt[u]);
        lp.add_row({{xv[u], -1}, {t, -1}}, RationalLp::Rel::le, -tgt[u]);
    }
    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::optimal) throw NumericError("no rational flow exists on the support of the weights");
    std::vector<mpq_class> vert(m);
    for (std::size_t u = 0; u < m; ++u) vert[u] = res.x[xv[u]];
    if (max_deviation(s, vert) >= eps)
        throw NumericError("best rational flow deviates by " + max_deviation(s, vert).get_str() + " >= eps");
    std::vector<std::vector<mpq_class>> flow(s.edges.size());
    for (std::size_t i = 0; i < s.edges.size(); ++i)
        for (std::size_t j = 0; j < s.edges[i].size(); ++j) flow[i].push_back(res.x[xe[i][j]]);
    return assemble(w, s, vert, flow);
}

}  // namespace

CylinderWeights rationalize_weights(const CylinderWeights& w, const mpq_class& eps, const RationalizeOptions& opt) {
    if (sgn(eps) <= 0) throw DomainError("eps must be positive");
    const WeightsReport rep = validate_weights(w, w.exact ? 0.0 : opt.flow_tolerance);
    if (w.exact && rep.ok) return w;
    if (!w.exact && !rep.ok) throw NumericError("weights violate the flow laws beyond tolerance: " + rep.message);
    if (w.exact && !rep.ok) {
        const WeightsReport loose = validate_weights(CylinderWeights{w.n, w.r, w.K, false, w.vertex_w, w.edge_w},
                                                     opt.flow_tolerance);
        if (!loose.ok) throw NumericError("weights violate the flow laws beyond tolerance: " + loose.message);
    }
    const Support s = make_support(w);
    CylinderWeights out;
    if (opt.method != RationalizeMethod::lp) {
        long D = 1;
        while (D < std::ceil(2.0 / eps.get_d())) D *= 2;
        for (; D <= opt.max_denominator; D *= 2)
            if (try_rounding(w, s, D, eps, out)) return out;
        if (opt.method == RationalizeMethod::rounding)
            throw NumericError("rounding did not reach eps within the denominator limit");
    }
    return solve_by_lp(w, s, eps);
}

}  // namespace hypack

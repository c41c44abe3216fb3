#include "hypack/shift.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <sstream>

#include "hypack/errors.hpp"

namespace hypack {

namespace {

std::string pattern_string(const Pattern& p) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < p.values.size(); ++i) os << (i ? "," : "") << p.values[i];
    os << ']';
    return os.str();
}

// forced[i-1][h] = index of g_i h in the ball, or -1 when it leaves the ball.
std::vector<std::vector<long>> shift_table(int n, int r) {
    const auto words = ball_words(n, r);
    std::map<ReducedWord, long> index;
    for (std::size_t j = 0; j < words.size(); ++j) index[words[j]] = static_cast<long>(j);
    std::vector<std::vector<long>> table(static_cast<std::size_t>(n), std::vector<long>(words.size(), -1));
    for (int i = 1; i <= n; ++i)
        for (std::size_t h = 0; h < words.size(); ++h) {
            const ReducedWord gh = ReducedWord{{i}} * words[h];
            auto it = index.find(gh);
            if (it != index.end()) table[static_cast<std::size_t>(i - 1)][h] = it->second;
        }
    return table;
}

struct Walker {
    const QuotientSystem& q;
    std::vector<std::vector<std::size_t>> inv;

    explicit Walker(const QuotientSystem& qs) : q(qs), inv(qs.perms.size()) {
        for (std::size_t i = 0; i < qs.perms.size(); ++i) {
            inv[i].resize(qs.size());
            for (std::size_t v = 0; v < qs.size(); ++v) inv[i][qs.perms[i][v]] = v;
        }
    }
    std::size_t step(std::size_t v, int letter) const {
        const std::size_t i = static_cast<std::size_t>(std::abs(letter) - 1);
        return letter > 0 ? q.perms[i][v] : inv[i][v];
    }
    std::size_t walk(std::size_t v, const ReducedWord& g) const {
        for (int l : g.letters) v = step(v, l);
        return v;
    }
    Pattern pattern(std::size_t v, const std::vector<ReducedWord>& ball) const {
        Pattern p;
        p.values.reserve(ball.size());
        for (const auto& h : ball) p.values.push_back(q.labels[walk(v, h)].values.at(0));
        return p;
    }
};

void check_radius(int r) {
    if (r < 0) throw DomainError("radius must be non-negative");
}

CylinderWeights count_weights(const QuotientSystem& q, const std::vector<std::size_t>& points, int r) {
    CylinderWeights w;
    w.n = q.n;
    w.r = r;
    w.K = q.K;
    w.exact = true;
    const Walker walker(q);
    std::map<std::size_t, Pattern> pat;
    const bool native = r == q.r;
    const auto ball = ball_words(q.n, r);
    auto pattern_of = [&](std::size_t v) -> const Pattern& {
        auto it = pat.find(v);
        if (it != pat.end()) return it->second;
        return pat.emplace(v, native ? q.labels[v] : walker.pattern(v, ball)).first->second;
    };
    const mpq_class unit(1, static_cast<unsigned long>(points.size()));
    for (std::size_t v : points) {
        w.vertex_w[pattern_of(v)] += unit;
        for (int i = 1; i <= q.n; ++i) {
            const std::size_t u = q.perms[static_cast<std::size_t>(i - 1)][v];
            w.edge_w[EdgePattern{i, pattern_of(v), pattern_of(u)}] += unit;
        }
    }
    return w;
}

}  // namespace

int letter_rank(int letter) {
    if (letter == 0) throw DomainError("letter 0 is not a generator");
    return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0);
}

bool ReducedWord::is_reduced() const {
    for (std::size_t j = 0; j < letters.size(); ++j) {
        if (letters[j] == 0) return false;
        if (j > 0 && letters[j] == -letters[j - 1]) return false;
    }
    return true;
}

ReducedWord ReducedWord::times(int letter) const {
    ReducedWord w = *this;
    if (!w.letters.empty() && w.letters.back() == -letter) w.letters.pop_back();
    else w.letters.push_back(letter);
    return w;
}

ReducedWord ReducedWord::operator*(const ReducedWord& other) const {
    ReducedWord w = *this;
    w.letters.reserve(letters.size() + other.letters.size());
    for (int l : other.letters) {
        if (!w.letters.empty() && w.letters.back() == -l) w.letters.pop_back();
        else w.letters.push_back(l);
    }
    return w;
}

ReducedWord ReducedWord::inverse() const {
    ReducedWord w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
    return w;
}

std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() <=> b.letters.size();
    for (std::size_t j = 0; j < a.letters.size(); ++j) {
        const int ra = letter_rank(a.letters[j]), rb = letter_rank(b.letters[j]);
        if (ra != rb) return ra <=> rb;
    }
    return std::strong_ordering::equal;
}

std::string to_string(const ReducedWord& w) {
    if (w.letters.empty()) return "e";
    std::ostringstream os;
    for (std::size_t j = 0; j < w.letters.size(); ++j) os << (j ? " " : "") << w.letters[j];
    return os.str();
}

std::vector<ReducedWord> ball_words(int n, int r) {
    if (n < 1) throw DomainError("free group rank must be positive");
    check_radius(r);
    std::vector<int> letters;
    for (int i = 1; i <= n; ++i) {
        letters.push_back(i);
        letters.push_back(-i);
    }
    std::vector<ReducedWord> out{ReducedWord{}};
    std::vector<ReducedWord> layer{ReducedWord{}};
    for (int len = 1; len <= r; ++len) {
        std::vector<ReducedWord> next;
        for (const auto& w : layer)
            for (int l : letters) {
                if (!w.letters.empty() && w.letters.back() == -l) continue;
                ReducedWord x = w;
                x.letters.push_back(l);
                next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::size_t ball_size(int n, int r) {
    if (n < 1) throw DomainError("free group rank must be positive");
    check_radius(r);
    std::size_t total = 1, layer = 2 * static_cast<std::size_t>(n);
    for (int len = 1; len <= r; ++len) {
        total += layer;
        layer *= 2 * static_cast<std::size_t>(n) - 1;
    }
    return total;
}

bool edge_consistent(int n, int r, const EdgePattern& e) {
    if (e.i < 1 || e.i > n) return false;
    const std::size_t m = ball_size(n, r);
    if (e.source.values.size() != m || e.target.values.size() != m) return false;
    const auto table = shift_table(n, r);
    const auto& row = table[static_cast<std::size_t>(e.i - 1)];
    for (std::size_t h = 0; h < m; ++h)
        if (row[h] >= 0 && e.source.values[static_cast<std::size_t>(row[h])] != e.target.values[h]) return false;
    return true;
}

WeightsReport validate_weights(const CylinderWeights& w, double tol) {
    if (w.vertex_w.empty()) return {false, "normalization: no vertex weights (sum is 0, expected 1)"};
    auto close = [&](const mpq_class& a, const mpq_class& b) {
        if (w.exact) return a == b;
        const mpq_class d = abs(a - b);
        return d.get_d() <= tol;
    };
    const std::size_t m = ball_size(w.n, w.r);
    mpq_class total;
    for (const auto& [p, x] : w.vertex_w) {
        if (p.values.size() != m) return {false, "pattern " + pattern_string(p) + " has the wrong size"};
        for (int c : p.values)
            if (c < 0 || c >= w.K) return {false, "pattern " + pattern_string(p) + " uses a color outside K"};
        if (sgn(x) < 0) return {false, "negative weight on pattern " + pattern_string(p)};
        total += x;
    }
    if (!close(total, 1)) return {false, "normalization: vertex weights sum to " + total.get_str() + ", expected 1"};
    const auto table = shift_table(w.n, w.r);
    std::vector<std::map<Pattern, mpq_class>> out(static_cast<std::size_t>(w.n)), in(static_cast<std::size_t>(w.n));
    for (const auto& [e, x] : w.edge_w) {
        if (e.i < 1 || e.i > w.n) return {false, "edge with generator index out of range"};
        if (sgn(x) < 0) return {false, "negative edge weight"};
        const auto& row = table[static_cast<std::size_t>(e.i - 1)];
        if (e.source.values.size() != m || e.target.values.size() != m)
            return {false, "edge pattern has the wrong size"};
        for (std::size_t h = 0; h < m; ++h)
            if (row[h] >= 0 && e.source.values[static_cast<std::size_t>(row[h])] != e.target.values[h])
                return {false, "edge " + pattern_string(e.source) + " -> " + pattern_string(e.target) +
                                   " disagrees on the overlap of the two balls"};
        out[static_cast<std::size_t>(e.i - 1)][e.source] += x;
        in[static_cast<std::size_t>(e.i - 1)][e.target] += x;
    }
    for (int i = 1; i <= w.n; ++i) {
        const auto& o = out[static_cast<std::size_t>(i - 1)];
        const auto& n_in = in[static_cast<std::size_t>(i - 1)];
        auto check = [&](const std::map<Pattern, mpq_class>& sums, const char* kind) -> WeightsReport {
            for (const auto& [p, x] : sums) {
                auto it = w.vertex_w.find(p);
                const mpq_class vw = it == w.vertex_w.end() ? mpq_class(0) : it->second;
                if (!close(x, vw))
                    return {false, std::string(kind) + "-flow of pattern " + pattern_string(p) + " under g_" +
                                       std::to_string(i) + ": edges sum to " + x.get_str() + ", vertex weight " +
                                       vw.get_str()};
            }
            for (const auto& [p, vw] : w.vertex_w)
                if (!sums.count(p) && !close(vw, 0))
                    return {false, std::string(kind) + "-flow of pattern " + pattern_string(p) + " under g_" +
                                       std::to_string(i) + ": no edges, vertex weight " + vw.get_str()};
            return {};
        };
        if (auto r = check(o, "out"); !r.ok) return r;
        if (auto r = check(n_in, "in"); !r.ok) return r;
    }
    return {};
}

namespace {

template <class T, class Mul>
CylinderWeights bernoulli_impl(const std::vector<T>& p, int r, int n, Mul&& to_q) {
    if (p.empty()) throw DomainError("empty distribution");
    const int K = static_cast<int>(p.size());
    const auto ball = ball_words(n, r);
    const std::size_t m = ball.size();
    const auto table = shift_table(n, r);
    CylinderWeights w;
    w.n = n;
    w.r = r;
    w.K = K;
    // Enumerate colorings of the ball as base-K counters.
    std::vector<int> vals(m, 0);
    std::vector<std::pair<Pattern, T>> verts;
    for (;;) {
        T prod = 1;
        for (int c : vals) prod *= p[static_cast<std::size_t>(c)];
        if (prod != T(0)) verts.push_back({Pattern{vals}, prod});
        std::size_t j = 0;
        while (j < m && ++vals[j] == K) vals[j++] = 0;
        if (j == m) break;
    }
    for (const auto& [pat, x] : verts) w.vertex_w[pat] = to_q(x);
    for (int i = 1; i <= n; ++i) {
        const auto& row = table[static_cast<std::size_t>(i - 1)];
        std::vector<std::size_t> free_pos;
        for (std::size_t h = 0; h < m; ++h)
            if (row[h] < 0) free_pos.push_back(h);
        for (const auto& [src, x] : verts) {
            Pattern tgt;
            tgt.values.assign(m, 0);
            for (std::size_t h = 0; h < m; ++h)
                if (row[h] >= 0) tgt.values[h] = src.values[static_cast<std::size_t>(row[h])];
            std::vector<int> f(free_pos.size(), 0);
            for (;;) {
                T prod = x;
                for (std::size_t j = 0; j < free_pos.size(); ++j) {
                    tgt.values[free_pos[j]] = f[j];
                    prod *= p[static_cast<std::size_t>(f[j])];
                }
                if (prod != T(0)) w.edge_w[EdgePattern{i, src, tgt}] = to_q(prod);
                std::size_t j = 0;
                while (j < f.size() && ++f[j] == K) f[j++] = 0;
                if (j == f.size()) break;
            }
        }
    }
    return w;
}

}  // namespace

CylinderWeights weights_from_bernoulli(const std::vector<mpq_class>& p, int r, int n) {
    mpq_class total;
    for (const auto& x : p) {
        if (sgn(x) < 0) throw DomainError("negative probability");
        total += x;
    }
    if (total != 1) throw DomainError("probabilities must sum to 1");
    auto w = bernoulli_impl(p, r, n, [](const mpq_class& x) { return x; });
    w.exact = true;
    return w;
}

CylinderWeights weights_from_bernoulli(const std::vector<double>& p, int r, int n) {
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw DomainError("negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("probabilities must sum to 1");
    auto w = bernoulli_impl(p, r, n, [](double x) { return mpq_class(x); });
    w.exact = false;
    return w;
}

CylinderWeights marginalize(const CylinderWeights& w, int r0) {
    if (r0 > w.r) throw DomainError("cannot marginalize to a larger radius");
    check_radius(r0);
    const std::size_t m = ball_size(w.n, r0);
    CylinderWeights out;
    out.n = w.n;
    out.r = r0;
    out.K = w.K;
    out.exact = w.exact;
    auto cut = [m](const Pattern& p) { return Pattern{{p.values.begin(), p.values.begin() + static_cast<long>(m)}}; };
    for (const auto& [p, x] : w.vertex_w) out.vertex_w[cut(p)] += x;
    for (const auto& [e, x] : w.edge_w) out.edge_w[EdgePattern{e.i, cut(e.source), cut(e.target)}] += x;
    return out;
}

WeightsReport validate_quotient(const QuotientSystem& q) {
    if (static_cast<int>(q.perms.size()) != q.n) return {false, "expected one permutation per generator"};
    const std::size_t N = q.size();
    for (std::size_t i = 0; i < q.perms.size(); ++i) {
        if (q.perms[i].size() != N) return {false, "permutation " + std::to_string(i + 1) + " has the wrong length"};
        std::vector<char> hit(N, 0);
        for (std::size_t v : q.perms[i]) {
            if (v >= N || hit[v]) return {false, "sigma_" + std::to_string(i + 1) + " is not a bijection"};
            hit[v] = 1;
        }
    }
    const std::size_t m = ball_size(q.n, q.r);
    for (const auto& l : q.labels)
        if (l.values.size() != m) return {false, "label has the wrong pattern size"};
    for (std::size_t i = 0; i < q.perms.size(); ++i)
        for (std::size_t v = 0; v < N; ++v) {
            const EdgePattern e{static_cast<int>(i + 1), q.labels[v], q.labels[q.perms[i][v]]};
            if (!edge_consistent(q.n, q.r, e))
                return {false, "point " + std::to_string(v) + " and its sigma_" + std::to_string(i + 1) +
                                   " image carry inconsistent labels"};
        }
    return {};
}

QuotientSystem build_quotient(const CylinderWeights& w) {
    if (const auto rep = validate_weights(w, 0.0); !rep.ok || !w.exact)
        throw ValidationError("build_quotient needs exact flow-balanced weights: " +
                              (rep.ok ? std::string("weights are not exact") : rep.message));
    mpz_class N = 1;
    auto absorb = [&N](const mpq_class& x) {
        if (sgn(x) > 0) mpz_lcm(N.get_mpz_t(), N.get_mpz_t(), x.get_den().get_mpz_t());
    };
    for (const auto& [p, x] : w.vertex_w) absorb(x);
    for (const auto& [e, x] : w.edge_w) absorb(x);
    if (N > 100'000'000) throw NumericError("quotient would need " + N.get_str() + " points");
    const std::size_t total = N.get_ui();
    auto count = [&](const mpq_class& x) {
        const mpq_class y = x * N;
        return static_cast<std::size_t>(mpz_class(y.get_num() / y.get_den()).get_ui());
    };

    QuotientSystem q;
    q.n = w.n;
    q.r = w.r;
    q.K = w.K;
    std::map<Pattern, std::pair<std::size_t, std::size_t>> range;  // start, count
    for (const auto& [p, x] : w.vertex_w) {
        const std::size_t c = count(x);
        if (c == 0) continue;
        range[p] = {q.labels.size(), c};
        q.labels.insert(q.labels.end(), c, p);
    }
    if (q.labels.size() != total) throw ValidationError("vertex counts do not add up to N");
    q.perms.assign(static_cast<std::size_t>(w.n), std::vector<std::size_t>(total, total));
    for (int i = 1; i <= w.n; ++i) {
        auto& sigma = q.perms[static_cast<std::size_t>(i - 1)];
        // b1 blocks: consecutive in the source range, edges in target order
        // (the map order). b2 blocks: consecutive in the target range, edges
        // in source order.
        std::map<Pattern, std::size_t> out_cursor, in_cursor;
        std::vector<std::pair<const EdgePattern*, std::size_t>> edges;
        for (const auto& [e, x] : w.edge_w)
            if (e.i == i && sgn(x) > 0) edges.push_back({&e, count(x)});
        std::map<std::pair<Pattern, Pattern>, std::size_t> b1_start;
        for (const auto& [e, c] : edges) {
            b1_start[{e->source, e->target}] = range.at(e->source).first + out_cursor[e->source];
            out_cursor[e->source] += c;
        }
        std::vector<std::size_t> order(edges.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (edges[a].first->target != edges[b].first->target) return edges[a].first->target < edges[b].first->target;
            return edges[a].first->source < edges[b].first->source;
        });
        for (std::size_t j : order) {
            const auto& [e, c] = edges[j];
            const std::size_t src = b1_start.at({e->source, e->target});
            const std::size_t dst = range.at(e->target).first + in_cursor[e->target];
            in_cursor[e->target] += c;
            for (std::size_t t = 0; t < c; ++t) sigma[src + t] = dst + t;
        }
        for (std::size_t v : sigma)
            if (v == total) throw ValidationError("flow laws did not fill every block");
    }
    return q;
}

std::vector<QuotientSystem> components(const QuotientSystem& q) {
    const std::size_t N = q.size();
    const Walker walker(q);
    std::vector<long> comp(N, -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t s = 0; s < N; ++s) {
        if (comp[s] >= 0) continue;
        const long id = static_cast<long>(members.size());
        members.emplace_back();
        std::deque<std::size_t> queue{s};
        comp[s] = id;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            members.back().push_back(v);
            for (int i = 1; i <= q.n; ++i)
                for (int l : {i, -i}) {
                    const std::size_t u = walker.step(v, l);
                    if (comp[u] < 0) {
                        comp[u] = id;
                        queue.push_back(u);
                    }
                }
        }
    }
    std::vector<QuotientSystem> out;
    for (auto& mem : members) {
        std::sort(mem.begin(), mem.end());
        std::map<std::size_t, std::size_t> local;
        for (std::size_t j = 0; j < mem.size(); ++j) local[mem[j]] = j;
        QuotientSystem c;
        c.n = q.n;
        c.r = q.r;
        c.K = q.K;
        for (std::size_t v : mem) c.labels.push_back(q.labels[v]);
        c.perms.assign(static_cast<std::size_t>(q.n), std::vector<std::size_t>(mem.size()));
        for (std::size_t i = 0; i < q.perms.size(); ++i)
            for (std::size_t j = 0; j < mem.size(); ++j) c.perms[i][j] = local.at(q.perms[i][mem[j]]);
        out.push_back(std::move(c));
    }
    return out;
}

std::size_t walk(const QuotientSystem& q, std::size_t start, const ReducedWord& g) {
    return Walker(q).walk(start, g);
}

int evaluate_lift(const PeriodicColoring& c, const ReducedWord& g) {
    if (!g.is_reduced()) throw DomainError("word is not reduced");
    return c.quotient.labels[walk(c.quotient, c.basepoint, g)].values.at(0);
}

Pattern lift_pattern(const QuotientSystem& q, std::size_t v, int r) {
    return Walker(q).pattern(v, ball_words(q.n, r));
}

CylinderWeights weights_from_periodic_coloring(const PeriodicColoring& c, int r) {
    check_radius(r);
    const QuotientSystem& q = c.quotient;
    if (c.basepoint >= q.size()) throw DomainError("basepoint out of range");
    const Walker walker(q);
    std::vector<char> seen(q.size(), 0);
    std::vector<std::size_t> points;
    std::deque<std::size_t> queue{c.basepoint};
    seen[c.basepoint] = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        points.push_back(v);
        for (int i = 1; i <= q.n; ++i)
            for (int l : {i, -i}) {
                const std::size_t u = walker.step(v, l);
                if (!seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
            }
    }
    std::sort(points.begin(), points.end());
    if (r < q.r) return marginalize(count_weights(q, points, q.r), r);
    return count_weights(q, points, r);
}

CylinderWeights periodic_measure(const QuotientSystem& q, int r) {
    check_radius(r);
    if (r < q.r) throw DomainError("requested radius is below the quotient's native radius");
    if (q.size() == 0) throw DomainError("empty quotient");
    std::vector<std::size_t> points(q.size());
    std::iota(points.begin(), points.end(), 0);
    return count_weights(q, points, r);
}

CylinderWeights periodic_measure(const QuotientSystem& q) { return periodic_measure(q, q.r); }

mpq_class approximation_error(const CylinderWeights& lambda, const CylinderWeights& mu, int r) {
    if (r > lambda.r || r > mu.r) throw DomainError("approximation radius exceeds a measure's radius");
    if (lambda.n != mu.n) throw DomainError("measures live on different free groups");
    const auto a = marginalize(lambda, r), b = marginalize(mu, r);
    mpq_class worst;
    for (const auto& [p, x] : a.vertex_w) {
        auto it = b.vertex_w.find(p);
        const mpq_class d = abs(x - (it == b.vertex_w.end() ? mpq_class(0) : it->second));
        if (d > worst) worst = d;
    }
    for (const auto& [p, x] : b.vertex_w)
        if (!a.vertex_w.count(p) && abs(x) > worst) worst = abs(x);
    return worst;
}

Approximation approximate(const CylinderWeights& mu, const mpq_class& eps, const RationalizeOptions& opt) {
    Approximation out;
    out.rational = rationalize_weights(mu, eps, opt);
    out.quotient = build_quotient(out.rational);
    const mpq_class N(static_cast<unsigned long>(out.quotient.size()));
    for (auto& comp : components(out.quotient)) {
        out.mixture.push_back(mpq_class(static_cast<unsigned long>(comp.size())) / N);
        out.colorings.push_back({std::move(comp), 0});
    }
    out.lambda = periodic_measure(out.quotient, mu.r);
    out.error = approximation_error(out.lambda, mu, mu.r);
    if (out.error >= eps) throw NumericError("approximation error " + out.error.get_str() + " is not below eps");
    return out;
}

}  // namespace hypack

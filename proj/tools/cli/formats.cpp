#include "formats.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "hypack/errors.hpp"

namespace hypack::cli {

namespace {

class Tokens {
public:
    Tokens(std::istream& is, const std::string& tag) {
        std::string line;
        bool first = true;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (first) {
                if (line != tag + " 1") throw DomainError("expected format tag '" + tag + " 1', got '" + line + "'");
                first = false;
                continue;
            }
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) toks_.push_back(t);
        }
        if (first) throw DomainError("missing format tag '" + tag + "'");
    }

    std::string next() {
        if (pos_ >= toks_.size()) throw DomainError("unexpected end of file");
        return toks_[pos_++];
    }
    void expect(const std::string& key) {
        const std::string t = next();
        if (t != key) throw DomainError("expected '" + key + "', got '" + t + "'");
    }
    double real() {
        const std::string t = next();
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::logic_error&) {
            throw DomainError("not a number: '" + t + "'");
        }
    }
    long integer() {
        const std::string t = next();
        try {
            std::size_t used = 0;
            const long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::logic_error&) {
            throw DomainError("not an integer: '" + t + "'");
        }
    }
    std::size_t count() {
        const long v = integer();
        if (v < 0) throw DomainError("negative count");
        return static_cast<std::size_t>(v);
    }
    void finish() const {
        if (pos_ != toks_.size()) throw DomainError("trailing data after '" + toks_[pos_ - 1] + "'");
    }

private:
    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};

Pattern read_pattern(Tokens& t, std::size_t len) {
    Pattern p;
    for (std::size_t j = 0; j < len; ++j) p.values.push_back(static_cast<int>(t.integer()));
    return p;
}

void write_pattern(std::ostream& os, const Pattern& p) {
    for (std::size_t j = 0; j < p.values.size(); ++j) os << (j ? " " : "") << p.values[j];
}

template <class T>
T load(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path + "'");
    return reader(in);
}

}  // namespace

void write_metadata(std::ostream& os, const std::string& command, std::uint64_t seed, const Params& params) {
    os << "# hypack " << kVersion << "\n# command: " << command << "\n# seed: " << seed << "\n# params:";
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    os << '\n';
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) throw DomainError("not a rational: '" + s + "'");
    if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

void write_packing(std::ostream& os, const PeriodicPacking& p) {
    os << "hypack-packing 1\nradius " << format_real(p.radius) << "\ngenerators " << p.generators.size() << '\n';
    for (const auto& g : p.generators) {
        for (std::size_t j = 0; j < 9; ++j) os << (j ? " " : "") << format_real(g.matrix()[j]);
        os << '\n';
    }
    os << "domain " << p.domain.size() << '\n';
    for (auto v : p.domain.vertices) os << format_real(v.x) << ' ' << format_real(v.y) << '\n';
    os << "centers " << p.centers.size() << '\n';
    for (std::size_t i = 0; i < p.centers.size(); ++i)
        os << format_real(p.centers[i].x) << ' ' << format_real(p.centers[i].y) << ' ' << p.stabilizer(i) << '\n';
}

PeriodicPacking read_packing(std::istream& is) {
    Tokens t(is, "hypack-packing");
    PeriodicPacking p;
    t.expect("radius");
    p.radius = t.real();
    t.expect("generators");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        Isometry::Matrix m{};
        for (auto& v : m) v = t.real();
        p.generators.emplace_back(m);
        if (!p.generators.back().is_valid(1e-8)) throw ValidationError("generator " + std::to_string(i) + " is not an isometry");
    }
    t.expect("domain");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        const double x = t.real();
        p.domain.vertices.push_back({x, t.real()});
    }
    t.expect("centers");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        const double x = t.real(), y = t.real();
        p.centers.push_back({x, y});
        p.stabilizers.push_back(static_cast<int>(t.integer()));
    }
    t.finish();
    return p;
}

void write_weights(std::ostream& os, const CylinderWeights& w) {
    os << "hypack-weights 1\nn " << w.n << "\nr " << w.r << "\nK " << w.K << "\nexact " << (w.exact ? 1 : 0)
       << "\nvertices " << w.vertex_w.size() << '\n';
    for (const auto& [p, x] : w.vertex_w) {
        write_pattern(os, p);
        os << ' ' << x.get_str() << '\n';
    }
    os << "edges " << w.edge_w.size() << '\n';
    for (const auto& [e, x] : w.edge_w) {
        os << e.i << "  ";
        write_pattern(os, e.source);
        os << "  ";
        write_pattern(os, e.target);
        os << "  " << x.get_str() << '\n';
    }
}

CylinderWeights read_weights(std::istream& is) {
    Tokens t(is, "hypack-weights");
    CylinderWeights w;
    t.expect("n");
    w.n = static_cast<int>(t.integer());
    t.expect("r");
    w.r = static_cast<int>(t.integer());
    t.expect("K");
    w.K = static_cast<int>(t.integer());
    t.expect("exact");
    w.exact = t.integer() != 0;
    if (w.n < 1 || w.r < 0 || w.K < 1) throw DomainError("invalid n, r or K");
    const std::size_t len = ball_size(w.n, w.r);
    t.expect("vertices");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        Pattern p = read_pattern(t, len);
        w.vertex_w[std::move(p)] = parse_rational(t.next());
    }
    t.expect("edges");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        EdgePattern e;
        e.i = static_cast<int>(t.integer());
        e.source = read_pattern(t, len);
        e.target = read_pattern(t, len);
        w.edge_w[std::move(e)] = parse_rational(t.next());
    }
    t.finish();
    return w;
}

void write_quotient(std::ostream& os, const QuotientSystem& q) {
    os << "hypack-quotient 1\nn " << q.n << "\nr " << q.r << "\nK " << q.K << "\nN " << q.size() << "\nlabels\n";
    for (const auto& l : q.labels) {
        write_pattern(os, l);
        os << '\n';
    }
    for (std::size_t i = 0; i < q.perms.size(); ++i) {
        os << "perm " << i + 1 << '\n';
        for (std::size_t v = 0; v < q.perms[i].size(); ++v) os << (v ? " " : "") << q.perms[i][v];
        os << '\n';
    }
}

QuotientSystem read_quotient(std::istream& is) {
    Tokens t(is, "hypack-quotient");
    QuotientSystem q;
    t.expect("n");
    q.n = static_cast<int>(t.integer());
    t.expect("r");
    q.r = static_cast<int>(t.integer());
    t.expect("K");
    q.K = static_cast<int>(t.integer());
    if (q.n < 1 || q.r < 0 || q.K < 1) throw DomainError("invalid n, r or K");
    t.expect("N");
    const std::size_t N = t.count();
    t.expect("labels");
    const std::size_t len = ball_size(q.n, q.r);
    for (std::size_t v = 0; v < N; ++v) q.labels.push_back(read_pattern(t, len));
    for (int i = 1; i <= q.n; ++i) {
        t.expect("perm");
        if (t.integer() != i) throw DomainError("permutations out of order");
        std::vector<std::size_t> perm;
        for (std::size_t v = 0; v < N; ++v) perm.push_back(t.count());
        q.perms.push_back(std::move(perm));
    }
    t.finish();
    return q;
}

void write_coloring(std::ostream& os, const PackingColoring& c) {
    os << "hypack-coloring 1\nembedding gamma2 " << format_real(c.embedding.basepoint.x) << ' '
       << format_real(c.embedding.basepoint.y) << "\nradius " << format_real(c.radius) << "\nwindow " << c.window
       << "\nvalues " << c.values.size() << '\n';
    for (const auto& [f, vals] : c.values) {
        os << f.length();
        for (int l : f.letters) os << ' ' << l;
        os << "  " << vals.size();
        for (auto v : vals) os << ' ' << format_real(v.x) << ' ' << format_real(v.y);
        os << '\n';
    }
}

PackingColoring read_coloring(std::istream& is) {
    Tokens t(is, "hypack-coloring");
    t.expect("embedding");
    t.expect("gamma2");
    const double bx = t.real(), by = t.real();
    PackingColoring c;
    c.embedding = default_free_group({bx, by});
    t.expect("radius");
    c.radius = t.real();
    t.expect("window");
    c.window = static_cast<int>(t.integer());
    t.expect("values");
    for (std::size_t n = t.count(), i = 0; i < n; ++i) {
        ReducedWord f;
        for (std::size_t len = t.count(), j = 0; j < len; ++j) f.letters.push_back(static_cast<int>(t.integer()));
        if (!f.is_reduced()) throw DomainError("word is not reduced");
        std::vector<KleinPoint> vals;
        for (std::size_t m = t.count(), j = 0; j < m; ++j) {
            const double x = t.real();
            vals.push_back({x, t.real()});
        }
        c.values[std::move(f)] = std::move(vals);
    }
    t.finish();
    return c;
}

PeriodicPacking load_packing(const std::string& path) { return load(path, &read_packing); }
CylinderWeights load_weights(const std::string& path) { return load(path, &read_weights); }
QuotientSystem load_quotient(const std::string& path) { return load(path, &read_quotient); }
PackingColoring load_coloring(const std::string& path) { return load(path, &read_coloring); }

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    return out;
}

}  // namespace hypack::cli

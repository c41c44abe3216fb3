#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "hypack/errors.hpp"
#include "hypack/montecarlo.hpp"
#include "hypack/sampling.hpp"
#include "hypack/tiling.hpp"

namespace hypack::cli {

namespace {

// Shortest representation that reads back to the same double.
std::string str(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void line(std::ostream& os, const std::string& key, const std::string& value) { os << key << " = " << value << '\n'; }

void estimate(std::ostream& os, const std::string& key, const McEstimate& e) {
    line(os, key, str(e.mean));
    line(os, key + "_stderr", str(e.stderr_));
}

// Runs one pipeline stage; library errors are re-raised with the stage name.
template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError("stage " + name + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + name + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError("stage " + name + ": " + e.what());
    }
}

}  // namespace

void cmd_tiling(int s, int a, std::ostream& os) {
    const TilingGeometry g = tiling_geometry(s, a);
    write_metadata(os, "tiling", 0, {{"s", str(s)}, {"a", str(a)}});
    const Polygon tile = build_tile(s, a);
    const double area = polygon_area(tile);
    const double expected = (s - 2 - 2.0 * s / a) * kPi;
    line(os, "circumradius", str(g.circumradius));
    line(os, "inradius", str(g.inradius));
    line(os, "edge_length", str(g.edge_length));
    line(os, "interior_angle", str(interior_angle(tile, 0)));
    line(os, "area", str(area));
    line(os, "expected_area", str(expected));
    line(os, "residual", str(std::abs(area - expected)));
}

void cmd_contraction(int s, int a, std::size_t samples, std::uint64_t seed, std::ostream& os) {
    const BranchedCover cov = build_cover(s, a);
    write_metadata(os, "contraction", seed, {{"s", str(s)}, {"a", str(a)}, {"samples", str(samples)}});
    double max_ratio = 0.0;
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const KleinPoint p = sample_point(cov.fine_tile, rng), q = sample_point(cov.fine_tile, rng);
        const double d = klein_distance(p, q);
        if (d > 0.0) max_ratio = std::max(max_ratio, klein_distance(apply_cover(cov, p), apply_cover(cov, q)) / d);
    }
    line(os, "k", str(cov.k));
    line(os, "c", str(cov.c));
    line(os, "fine_circumradius", str(cov.fine.circumradius));
    line(os, "coarse_circumradius", str(cov.coarse.circumradius));
    line(os, "max_ratio", str(max_ratio));
    line(os, "contracting", max_ratio <= cov.c ? "yes" : "no");
}

void cmd_homothety(int k, int s, int a, std::size_t samples, std::uint64_t seed, std::ostream& os) {
    const PeriodicPacking p = build_tight_packing(k);
    const BranchedCover cov = build_cover(s, a);
    write_metadata(os, "homothety", seed, {{"k", str(k)}, {"s", str(s)}, {"a", str(a)}, {"samples", str(samples)}});
    const HomothetyEstimate e = homothety_density_estimate(p, cov, {samples, seed});
    line(os, "c", str(cov.c));
    line(os, "radius", str(e.radius));
    line(os, "expanded_radius", str(e.expanded_radius));
    line(os, "source_density", str(periodic_density(p).value));
    estimate(os, "density", e.density);
    estimate(os, "expanded_density", e.expanded_density);
}

void cmd_density(const PeriodicPacking& p, std::size_t mc_samples, std::uint64_t seed, std::ostream& os) {
    write_metadata(os, "density", seed, {{"mc_samples", str(mc_samples)}});
    const ValidationReport v = validate(p);
    line(os, "valid", v.ok ? "yes" : "no");
    line(os, "min_separation", str(v.min_separation));
    if (!v.ok) throw ValidationError(v.message);
    line(os, "radius", str(p.radius));
    line(os, "domain_area", str(polygon_area(p.domain)));
    line(os, "density", str(periodic_density(p).value));
    if (mc_samples > 0) {
        const DensityReport mc = mc_density(p, mc_samples, seed);
        line(os, "mc_density", str(mc.value));
        line(os, "mc_density_stderr", str(mc.stderr_));
    }
}

void cmd_bounds(double r_min, double r_max, double step, std::ostream& os) {
    if (!(r_min > 0.0) || !(r_max >= r_min) || !(step > 0.0)) throw DomainError("need 0 < r_min <= r_max and step > 0");
    write_metadata(os, "bounds", 0, {{"r_min", str(r_min)}, {"r_max", str(r_max)}, {"step", str(step)}});
    os << "r,ft_bound\n";
    const auto n = static_cast<long>(std::floor((r_max - r_min) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double r = r_min + static_cast<double>(i) * step;
        os << str(r) << ',' << str(ft_bound(r)) << '\n';
    }
}

void cmd_tight(int k_max, std::ostream& os) {
    if (k_max < 7) throw DomainError("k_max must be at least 7");
    write_metadata(os, "tight", 0, {{"k_max", str(k_max)}});
    os << "k,r_k,density,ft_residual,gap_3_over_pi\n";
    for (int k = 7; k <= k_max; ++k) {
        const double r = tight_radius(k);
        const double d = periodic_density(build_tight_packing(k)).value;
        os << k << ',' << str(r) << ',' << str(d) << ',' << str(std::abs(d - ft_bound(r))) << ','
           << str(3.0 / kPi - d) << '\n';
    }
}

void cmd_weights(const std::vector<mpq_class>& p, int r, int n, std::ostream& os) {
    const CylinderWeights w = weights_from_bernoulli(p, r, n);
    std::string probs;
    for (const auto& x : p) probs += (probs.empty() ? "" : ",") + x.get_str();
    write_metadata(os, "weights", 0, {{"p", probs}, {"r", str(r)}, {"n", str(n)}});
    write_weights(os, w);
}

ApproxReport cmd_approx(const CylinderWeights& w, const mpq_class& eps, std::ostream& quotient_out,
                        std::ostream& lambda_out, std::ostream& report) {
    const WeightsReport in = validate_weights(w);
    if (w.exact && !in.ok) throw ValidationError("input weights: " + in.message);
    ApproxReport rep;
    rep.approx = approximate(w, eps);
    rep.quotient_valid = validate_quotient(rep.approx.quotient).ok;
    rep.lambda_valid = validate_weights(rep.approx.lambda).ok;
    rep.support_preserved = true;
    for (const auto& [e, x] : rep.approx.lambda.edge_w)
        if (sgn(x) > 0) {
            auto it = w.edge_w.find(e);
            if (it == w.edge_w.end() || sgn(it->second) == 0) rep.support_preserved = false;
        }
    const Params params{{"eps", eps.get_str()}, {"n", str(w.n)}, {"r", str(w.r)}, {"K", str(w.K)}};
    write_metadata(quotient_out, "approx", 0, params);
    write_quotient(quotient_out, rep.approx.quotient);
    write_metadata(lambda_out, "approx", 0, params);
    write_weights(lambda_out, rep.approx.lambda);
    write_metadata(report, "approx", 0, params);
    line(report, "quotient_size", str(rep.approx.quotient.size()));
    line(report, "components", str(rep.approx.colorings.size()));
    std::string mix;
    for (const auto& m : rep.approx.mixture) mix += (mix.empty() ? "" : " ") + m.get_str();
    line(report, "mixture", mix);
    line(report, "error", rep.approx.error.get_str());
    line(report, "error_below_eps", rep.approx.error < eps ? "yes" : "no");
    line(report, "quotient_valid", rep.quotient_valid ? "yes" : "no");
    line(report, "lambda_valid", rep.lambda_valid ? "yes" : "no");
    line(report, "support_preserved", rep.support_preserved ? "yes" : "no");
    if (!rep.quotient_valid || !rep.lambda_valid) throw ValidationError("approximation output failed validation");
    return rep;
}

void cmd_encode(const PeriodicPacking& p, double window, int words, KleinPoint basepoint, std::ostream& coloring_out,
                std::ostream& report) {
    const FreeGroupEmbedding emb = default_free_group(basepoint);
    const WindowPacking w = window_packing(p, window);
    const PackingColoring c = encode(w.centers, p.radius, emb, words);
    const Params params{{"window", str(window)}, {"words", str(words)}, {"basepoint", str(basepoint.x) + "," + str(basepoint.y)}};
    write_metadata(coloring_out, "encode", 0, params);
    write_coloring(coloring_out, c);
    const WindowPacking back = decode(c);
    // Every center of the window lies in some translate of the domain, but only
    // those in translates indexed by the word window come back.
    std::size_t matched = 0;
    for (auto q : back.centers)
        for (auto o : w.centers)
            if (klein_distance(q, o) < 1e-9) {
                ++matched;
                break;
            }
    write_metadata(report, "encode", 0, params);
    line(report, "window_centers", str(w.centers.size()));
    line(report, "encoded_centers", str(back.centers.size()));
    line(report, "round_trip", matched == back.centers.size() ? "yes" : "no");
    if (matched != back.centers.size()) throw ValidationError("decode(encode(P)) is not contained in P");
}

void cmd_average(const PeriodicPacking& p, std::size_t samples, std::uint64_t seed, int probes, std::ostream& os) {
    write_metadata(os, "average", seed, {{"samples", str(samples)}, {"probes", str(probes)}});
    const PeriodicFamily fam(p, p.radius);
    const FreeGroupEmbedding e1 = default_free_group();
    const FreeGroupEmbedding e2 = default_free_group({0.3, 0.2});
    const McEstimate a1 = average_functional(origin_coverage, fam, e1, {samples, derive_seed(seed, 1), 0.0, {}});
    const McEstimate a2 = average_functional(origin_coverage, fam, e2, {samples, derive_seed(seed, 2), 0.0, {}});
    const double exact = periodic_density(p).value;
    line(os, "exact_density", str(exact));
    estimate(os, "average_domain1", a1);
    estimate(os, "average_domain2", a2);
    line(os, "z_domain1_vs_exact", str((a1.mean - exact) / a1.stderr_));
    line(os, "z_domain1_vs_domain2", str((a1.mean - a2.mean) / std::hypot(a1.stderr_, a2.stderr_)));
    Rng rng(derive_seed(seed, 3));
    std::vector<Isometry> hs;
    for (int i = 0; i < probes; ++i) hs.push_back(random_isometry(rng, 2.0));
    const InvarianceReport inv = invariance_test(fam, e1, hs, samples, derive_seed(seed, 4));
    double worst = 0.0;
    for (double z : inv.z_scores) worst = std::max(worst, std::abs(z));
    line(os, "invariance_max_abs_z", str(worst));
    line(os, "invariance_passed", inv.passed ? "yes" : "no");
}

bool PipelineReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const StageCheck& c) { return c.ok; });
}

PipelineReport cmd_pipeline(const PipelineParams& prm, std::ostream& os) {
    if (prm.samples == 0) throw DomainError("sample count must be positive");
    if (prm.words < 1) throw DomainError("words must be at least 1");
    write_metadata(os, "pipeline", prm.seed,
                   {{"k", str(prm.k)}, {"s", str(prm.s)}, {"a", str(prm.a)}, {"samples", str(prm.samples)},
                    {"x", str(prm.x)}, {"delta", str(prm.delta)}, {"words", str(prm.words)}, {"eps", prm.eps.get_str()}});
    PipelineReport rep;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        rep.checks.push_back({name, ok, detail});
        line(os, "check." + name, std::string(ok ? "pass" : "FAIL") + " (" + detail + ")");
        if (!ok) throw ValidationError("stage " + name + ": " + detail);
    };

    const PeriodicPacking P = stage("packing", [&] { return build_tight_packing(prm.k); });
    const double r = P.radius;
    {
        const ValidationReport v = validate(P);
        check("packing", v.ok, "min separation " + str(v.min_separation) + " vs 2r " + str(2 * r));
    }
    rep.tight_density = periodic_density(P).value;
    line(os, "tight_density", str(rep.tight_density));

    stage("homothety", [&] {
        const BranchedCover cov = build_cover(prm.s, prm.a);
        rep.contraction = cov.c;
        rep.homothety = homothety_density_estimate(P, cov, {prm.samples, derive_seed(prm.seed, 1)});
    });
    check("contraction", rep.contraction < 1.0, "c = " + str(rep.contraction));
    line(os, "homothety.c", str(rep.contraction));
    estimate(os, "homothety.density", rep.homothety.density);
    estimate(os, "homothety.expanded_density", rep.homothety.expanded_density);

    const FreeGroupEmbedding emb = default_free_group();
    const int n = static_cast<int>(emb.generators.size());
    // Value sets on tiles that share no side stay 2r apart when every kept
    // center is within x of its tile's basepoint.
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& w : ball_words(n, 6))
        if (w.length() >= 2) clearance = std::min(clearance, klein_distance({}, emb.element(w)({})));
    check("clearance", 2 * prm.x + 2 * r <= clearance,
          "2x + 2r = " + str(2 * prm.x + 2 * r) + ", nearest non-adjacent basepoint " + str(clearance));

    // Empirical cylinder weights of the averaged family, pooled over words.
    Discretization disc;
    disc.x = prm.x;
    disc.delta = prm.delta;
    disc.center = emb.basepoint;
    std::map<Pattern, long> vcount;
    std::map<EdgePattern, long> ecount;
    long total = 0;
    double worst_hausdorff = 0.0;
    std::size_t resampled = 0;
    stage("encode", [&] {
        const PeriodicFamily fam(P, prm.x);
        const auto window = ball_words(n, prm.words);
        const auto inner = ball_words(n, prm.words - 1);
        const std::size_t M = prm.placements ? prm.placements : std::min<std::size_t>(prm.samples, 2000);
        Rng rng(derive_seed(prm.seed, 2));
        for (std::size_t m = 0; m < M; ++m) {
            const Isometry g = sample_group_fiber(emb, rng);
            const Isometry ginv = g.inverse();
            PointIndex idx(1e-7);
            for (const auto& f : window)
                for (auto q : fam.centers_near(g(emb.element(f)(emb.basepoint)), prm.x)) idx.insert(ginv(q));
            PackingColoring c;
            try {
                c = encode(idx.points(), r, emb, prm.words);
            } catch (const DomainError&) {
                ++resampled;  // a center on a tile boundary
                --m;
                continue;
            }
            const DiscreteColoring dc = discretize(c, disc);
            for (const auto& [f, vals] : c.values) {
                std::vector<KleinPoint> kept;
                for (auto v : vals)
                    if (klein_distance(disc.center, v) <= disc.x) kept.push_back(v);
                worst_hausdorff = std::max(worst_hausdorff, hausdorff_distance(disc.cells[static_cast<std::size_t>(dc.symbols.at(f))], kept));
            }
            for (const auto& f : inner) {
                const int sym = dc.symbols.at(f);
                ++vcount[Pattern{{sym}}];
                ++total;
                for (int i = 1; i <= n; ++i) ++ecount[EdgePattern{i, Pattern{{sym}}, Pattern{{dc.symbols.at(f.times(i))}}}];
            }
        }
    });
    rep.symbols = disc.cells.size();
    line(os, "encode.resampled", str(resampled));
    line(os, "discretize.symbols", str(rep.symbols));
    check("discretize", worst_hausdorff <= prm.delta,
          "max Hausdorff " + str(worst_hausdorff) + " <= delta " + str(prm.delta));

    CylinderWeights mu;
    mu.n = n;
    mu.r = 0;
    mu.K = static_cast<int>(std::max<std::size_t>(rep.symbols, 1));
    mu.exact = false;
    std::size_t dropped = 0;
    for (const auto& [p, cnt] : vcount) {
        mu.vertex_w[p] = mpq_class(cnt, total);
        mu.vertex_w[p].canonicalize();
    }
    for (const auto& [e, cnt] : ecount) {
        // Glued representatives of adjacent tiles must stay 2r apart.
        std::vector<KleinPoint> both = disc.cells[static_cast<std::size_t>(e.source.values[0])];
        for (auto q : disc.cells[static_cast<std::size_t>(e.target.values[0])])
            both.push_back(emb.generators[static_cast<std::size_t>(e.i - 1)](q));
        if (min_separation(both) < 2 * r - 1e-9) {
            ++dropped;
            mu.edge_w[e] = 0;
            continue;
        }
        mu.edge_w[e] = mpq_class(cnt, total);
        mu.edge_w[e].canonicalize();
    }
    line(os, "weights.patterns", str(mu.vertex_w.size()));
    line(os, "weights.edges", str(mu.edge_w.size()));
    line(os, "weights.dropped_edges", str(dropped));

    RationalizeOptions ropt;
    ropt.method = RationalizeMethod::rounding;
    ropt.flow_tolerance = 0.5 * prm.eps.get_d();
    const Approximation ap = stage("approx", [&] { return approximate(mu, prm.eps, ropt); });
    rep.quotient_size = ap.quotient.size();
    rep.components = ap.colorings.size();
    rep.approx_error = ap.error;
    line(os, "approx.quotient_size", str(rep.quotient_size));
    line(os, "approx.components", str(rep.components));
    line(os, "approx.error", ap.error.get_str());
    check("approx", ap.error < prm.eps && validate_quotient(ap.quotient).ok && validate_weights(ap.lambda).ok,
          "error " + ap.error.get_str() + " < eps " + prm.eps.get_str() + ", quotient and lambda valid");
    bool zero_kept = true;
    for (const auto& [e, x] : ap.lambda.edge_w)
        if (sgn(x) > 0 && sgn(mu.edge_w.at(e)) == 0) zero_kept = false;
    check("support", zero_kept, "lambda vanishes on every pattern of weight zero");

    rep.decoded_radius = r;
    stage("decode", [&] {
        for (const auto& col : ap.colorings) {
            PackingColoring c{emb, r, prm.words + 1, {}};
            for (const auto& f : ball_words(n, prm.words + 1))
                c.values[f] = disc.cells[static_cast<std::size_t>(evaluate_lift(col, f))];
            decode(c);
        }
    });
    check("decode", true, "decoded windows of all " + str(ap.colorings.size()) + " components keep separation 2r");

    // Exact density of the periodic packings: a fundamental domain of the
    // stabilizer of a point is the union of N tiles of area 2 pi.
    const double tile_area = polygon_area(emb.domain);
    double mixture = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < ap.colorings.size(); ++i)
        if (ap.colorings[i].quotient.size() > ap.colorings[largest].quotient.size()) largest = i;
    for (std::size_t v = 0; v < ap.quotient.size(); ++v)
        mixture += static_cast<double>(disc.cells[static_cast<std::size_t>(ap.quotient.labels[v].values[0])].size());
    rep.periodic_density = mixture * disk_area(r) / (tile_area * static_cast<double>(ap.quotient.size()));
    const QuotientSystem& lq = ap.colorings[largest].quotient;
    double comp = 0.0;
    for (const auto& lab : lq.labels) comp += static_cast<double>(disc.cells[static_cast<std::size_t>(lab.values[0])].size());
    rep.component_density = comp * disk_area(r) / (tile_area * static_cast<double>(lq.size()));
    // The periodic measure is uniform over the basepoints of the component.
    rep.component_density_mc = stage("average", [&] {
        const std::size_t N = lq.size();
        const std::size_t per = std::max<std::size_t>(1, prm.samples / N);
        McEstimate total{0.0, 0.0, 0};
        double var = 0.0;
        for (std::size_t v = 0; v < N; ++v) {
            const PeriodicColoringFamily fam(emb, PeriodicColoring{lq, v}, disc.cells, r);
            const McEstimate e =
                average_functional(origin_coverage, fam, emb, {per, derive_seed(prm.seed, 100 + v), 0.0, {}});
            total.mean += e.mean / static_cast<double>(N);
            var += e.stderr_ * e.stderr_;
            total.samples += e.samples;
        }
        total.stderr_ = std::sqrt(var) / static_cast<double>(N);
        return total;
    });
    line(os, "periodic.density", str(rep.periodic_density));
    line(os, "periodic.largest_component_density", str(rep.component_density));
    estimate(os, "periodic.largest_component_mc", rep.component_density_mc);
    const double z = (rep.component_density_mc.mean - rep.component_density) /
                     std::max(rep.component_density_mc.stderr_, 1e-300);
    check("average", std::abs(z) <= 4.0, "averaged coverage vs exact density, z = " + str(z));
    line(os, "ok", rep.ok() ? "yes" : "no");
    return rep;
}

}  // namespace hypack::cli

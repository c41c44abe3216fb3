#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hypack/errors.hpp"

namespace {

using namespace hypack;
using namespace hypack::cli;

// Writes to --output when given, else to stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) file_ = open_output(path);
    }
    std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

KleinPoint parse_point(const std::string& s) {
    std::istringstream is(s);
    KleinPoint p;
    char comma = 0;
    if (!(is >> p.x >> comma >> p.y) || comma != ',') throw DomainError("expected a point as x,y");
    return p;
}

PeriodicPacking packing_from(const std::string& file, int k, bool index2) {
    if (!file.empty()) return load_packing(file);
    if (k == 0) throw DomainError("give --packing FILE or --k K");
    return index2 ? build_tight_packing_index2(k) : build_tight_packing(k);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic circle packings, branched homotheties and periodic approximations"};
    app.require_subcommand(1);
    std::string output;
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    int s = 3, a = 7, k = 0;

    auto* tiling = app.add_subcommand("tiling", "Geometry of the {s,a} tiling and its area identity");
    tiling->add_option("--s", s, "Polygon sides")->required();
    tiling->add_option("--a", a, "Polygons per vertex")->required();

    auto* contraction = app.add_subcommand("contraction", "Contraction constant of the branched homothety");
    contraction->add_option("--s", s)->required();
    contraction->add_option("--a", a)->required();
    contraction->add_option("--samples", samples);

    auto* homothety = app.add_subcommand("homothety", "Density of the lifted tight packing");
    homothety->add_option("--k", k)->required();
    homothety->add_option("--s", s)->required();
    homothety->add_option("--a", a)->required();
    homothety->add_option("--samples", samples);

    std::string packing_file;
    bool index2 = false;
    std::size_t mc_samples = 0;
    auto* density = app.add_subcommand("density", "Exact density of a periodic packing");
    density->add_option("--packing", packing_file, "Packing file");
    density->add_option("--k", k, "Tight packing for k");
    density->add_flag("--index2", index2, "Use the index-2 subgroup (even k)");
    density->add_option("--mc", mc_samples, "Monte-Carlo samples for a cross-check");

    std::string save_packing;
    auto* tight_packing = app.add_subcommand("packing", "Write the tight packing for k as a packing file");
    tight_packing->add_option("--k", k)->required();
    tight_packing->add_flag("--index2", index2);

    double r_min = 0.01, r_max = 10.0, step = 0.01;
    auto* bounds = app.add_subcommand("bounds", "CSV of the three-disk bound");
    bounds->add_option("--r-min", r_min);
    bounds->add_option("--r-max", r_max);
    bounds->add_option("--step", step);

    int k_max = 30;
    auto* tight = app.add_subcommand("tight", "CSV of tight packing densities");
    tight->add_option("--k-max", k_max);

    std::string probs;
    int radius = 0, rank = 1;
    auto* weights = app.add_subcommand("weights", "Bernoulli cylinder weights file");
    weights->add_option("--p", probs, "Comma-separated probabilities p/q")->required();
    weights->add_option("--r", radius);
    weights->add_option("--n", rank);

    std::string weights_file, quotient_out, lambda_out, eps = "1/10";
    auto* approx = app.add_subcommand("approx", "Periodic approximation of cylinder weights");
    approx->add_option("--weights", weights_file)->required();
    approx->add_option("--epsilon", eps);
    approx->add_option("--quotient-out", quotient_out)->required();
    approx->add_option("--lambda-out", lambda_out)->required();

    double window = 2.0;
    int words = 2;
    std::string basepoint = "0,0", coloring_out;
    auto* enc = app.add_subcommand("encode", "Encode a window of a packing as a coloring");
    enc->add_option("--packing", packing_file);
    enc->add_option("--k", k);
    enc->add_option("--window", window, "Hyperbolic radius of the window");
    enc->add_option("--words", words, "Word length of the coloring window");
    enc->add_option("--basepoint", basepoint);
    enc->add_option("--coloring-out", coloring_out)->required();

    int probes = 10;
    auto* average = app.add_subcommand("average", "Fundamental-domain averaging checks");
    average->add_option("--packing", packing_file);
    average->add_option("--k", k);
    average->add_option("--samples", samples);
    average->add_option("--probes", probes);

    PipelineParams pp;
    std::string pipeline_eps = "1/10";
    auto* pipeline = app.add_subcommand("pipeline", "End-to-end approximation of the tight packing");
    pipeline->add_option("--k", pp.k);
    pipeline->add_option("--s", pp.s);
    pipeline->add_option("--a", pp.a);
    pipeline->add_option("--samples", pp.samples);
    pipeline->add_option("--x", pp.x);
    pipeline->add_option("--delta", pp.delta);
    pipeline->add_option("--words", pp.words);
    pipeline->add_option("--placements", pp.placements);
    pipeline->add_option("--epsilon", pipeline_eps);

    for (auto* sub : app.get_subcommands({})) {
        sub->add_option("--output", output, "Output path (default stdout)");
        sub->add_option("--seed", seed, "Random seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Sink sink(output);
        std::ostream& os = sink.get();
        if (*tiling) cmd_tiling(s, a, os);
        else if (*contraction) cmd_contraction(s, a, samples, seed, os);
        else if (*homothety) cmd_homothety(k, s, a, samples, seed, os);
        else if (*density) cmd_density(packing_from(packing_file, k, index2), mc_samples, seed, os);
        else if (*tight_packing) {
            write_metadata(os, "packing", seed, {{"k", std::to_string(k)}, {"index2", index2 ? "1" : "0"}});
            write_packing(os, packing_from("", k, index2));
        } else if (*bounds) cmd_bounds(r_min, r_max, step, os);
        else if (*tight) cmd_tight(k_max, os);
        else if (*weights) {
            std::vector<mpq_class> p;
            std::stringstream ss(probs);
            for (std::string tok; std::getline(ss, tok, ',');) p.push_back(parse_rational(tok));
            cmd_weights(p, radius, rank, os);
        } else if (*approx) {
            std::ofstream q = open_output(quotient_out), l = open_output(lambda_out);
            cmd_approx(load_weights(weights_file), parse_rational(eps), q, l, os);
        } else if (*enc) {
            std::ofstream c = open_output(coloring_out);
            cmd_encode(packing_from(packing_file, k, false), window, words, parse_point(basepoint), c, os);
        } else if (*average) cmd_average(packing_from(packing_file, k, false), samples, seed, probes, os);
        else if (*pipeline) {
            pp.seed = seed;
            pp.eps = parse_rational(pipeline_eps);
            cmd_pipeline(pp, os);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

// Experiment drivers behind the hypack command line. Every command writes a
// metadata block followed by its report; outputs depend only on the inputs
// and the seed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "formats.hpp"
#include "hypack/branched.hpp"
#include "hypack/packing.hpp"
#include "hypack/shift.hpp"
#include "hypack/transport.hpp"

namespace hypack::cli {

void cmd_tiling(int s, int a, std::ostream& os);

/// Contraction constant and a sampled check of d(Bp, Bq) <= c d(p, q).
void cmd_contraction(int s, int a, std::size_t samples, std::uint64_t seed, std::ostream& os);

void cmd_homothety(int k, int s, int a, std::size_t samples, std::uint64_t seed, std::ostream& os);

/// Exact density, plus a Monte-Carlo estimate when mc_samples > 0.
void cmd_density(const PeriodicPacking& p, std::size_t mc_samples, std::uint64_t seed, std::ostream& os);

/// CSV r,ft_bound.
void cmd_bounds(double r_min, double r_max, double step, std::ostream& os);

/// CSV k,r_k,density,ft_residual,gap_3_over_pi for 7 <= k <= k_max.
void cmd_tight(int k_max, std::ostream& os);

/// Bernoulli weights file for the given probabilities.
void cmd_weights(const std::vector<mpq_class>& p, int r, int n, std::ostream& os);

struct ApproxReport {
    Approximation approx;
    bool quotient_valid = false;
    bool lambda_valid = false;
    bool support_preserved = false;
};

/// Writes the quotient and lambda files and a report with the exact error.
ApproxReport cmd_approx(const CylinderWeights& w, const mpq_class& eps, std::ostream& quotient_out,
                        std::ostream& lambda_out, std::ostream& report);

/// Encodes the orbit points within `window` of the origin on words of length
/// <= words and checks the decode round trip.
void cmd_encode(const PeriodicPacking& p, double window, int words, KleinPoint basepoint, std::ostream& coloring_out,
                std::ostream& report);

/// Averaged origin coverage against the exact density, over two fundamental
/// domains, plus the invariance test for `probes` random isometries.
void cmd_average(const PeriodicPacking& p, std::size_t samples, std::uint64_t seed, int probes, std::ostream& os);

struct PipelineParams {
    int k = 7;
    int s = 3;
    int a = 20;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    double x = 0.85;          // discretization ball radius
    double delta = 0.6;       // discretization scale
    int words = 2;            // encoding window (word length)
    std::size_t placements = 0;  // random placements for the empirical measure; 0: min(samples, 2000)
    mpq_class eps = mpq_class(1, 10);
};

struct StageCheck {
    std::string stage;
    bool ok = false;
    std::string detail;
};

struct PipelineReport {
    std::vector<StageCheck> checks;
    double tight_density = 0.0;
    double contraction = 0.0;
    HomothetyEstimate homothety;
    std::size_t symbols = 0;
    std::size_t quotient_size = 0;
    std::size_t components = 0;
    mpq_class approx_error;
    double decoded_radius = 0.0;
    double periodic_density = 0.0;      // exact, mixture over components
    double component_density = 0.0;     // exact, largest component
    McEstimate component_density_mc;    // averaged coverage, largest component

    bool ok() const;
};

/// encode -> discretize -> approx -> decode -> average on the k-tight packing,
/// plus the homothety density estimate for (s, a). A failing stage throws the
/// library error with the stage name prefixed.
PipelineReport cmd_pipeline(const PipelineParams& params, std::ostream& os);

}  // namespace hypack::cli

#pragma once

// Invariant measures on colorings of the free group F_n, their cylinder
// weights on the pattern graph, and periodic approximations built from finite
// quotients of the Cayley tree.
//
// Letters are nonzero integers: +i is the generator g_i and -i its inverse
// (1 <= i <= n). Words are ordered by length, then lexicographically with
// letter order g_1 < g_1^-1 < g_2 < g_2^-1 < ...; with this order the ball
// B_r(id) is a prefix of B_r'(id) for r <= r'.

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hypack {

int letter_rank(int letter);

struct ReducedWord {
    std::vector<int> letters;

    std::size_t length() const { return letters.size(); }
    bool is_reduced() const;
    /// Right multiplication by one letter, cancelling if needed.
    ReducedWord times(int letter) const;
    ReducedWord operator*(const ReducedWord& other) const;
    ReducedWord inverse() const;

    friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
    friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b);
};

std::string to_string(const ReducedWord& w);

/// B_r(id) in canonical order.
std::vector<ReducedWord> ball_words(int n, int r);
std::size_t ball_size(int n, int r);

/// Colors on B_r(id), aligned with ball_words(n, r).
struct Pattern {
    std::vector<int> values;
    friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

/// Coloring of B_r(id) u B_r(g_i), stored as the source pattern h -> psi(h)
/// and the target pattern h -> psi(g_i h).
struct EdgePattern {
    int i = 1;
    Pattern source;
    Pattern target;
    friend auto operator<=>(const EdgePattern&, const EdgePattern&) = default;
};

/// True when source and target agree on the overlap of the two balls.
bool edge_consistent(int n, int r, const EdgePattern& e);

struct CylinderWeights {
    int n = 1;
    int r = 0;
    int K = 2;
    bool exact = true;  // false: values are binary rationals standing in for reals
    std::map<Pattern, mpq_class> vertex_w;
    std::map<EdgePattern, mpq_class> edge_w;
};

struct WeightsReport {
    bool ok = true;
    std::string message;
};

/// Normalization and in/out flow balance per (pattern, generator). Exact for
/// exact weights, within tol otherwise.
WeightsReport validate_weights(const CylinderWeights& w, double tol = 1e-12);

CylinderWeights weights_from_bernoulli(const std::vector<mpq_class>& p, int r, int n);
/// Same product measure from floating-point probabilities; exact = false.
CylinderWeights weights_from_bernoulli(const std::vector<double>& p, int r, int n);

/// Weights restricted to radius r0 <= w.r (vertex and edge marginals).
CylinderWeights marginalize(const CylinderWeights& w, int r0);

enum class RationalizeMethod { automatic, rounding, lp };

struct RationalizeOptions {
    RationalizeMethod method = RationalizeMethod::automatic;
    double flow_tolerance = 1e-9;
    long long max_denominator = 1LL << 26;
};

/// Exact rational weights satisfying both flow laws, zero on every edge where
/// w is zero, with max vertex deviation below eps. The primary method rounds
/// vertex weights to a common denominator and repairs each generator's flow as
/// an integer transportation problem; the fallback is an exact LP minimizing
/// the max deviation.
CylinderWeights rationalize_weights(const CylinderWeights& w, const mpq_class& eps,
                                    const RationalizeOptions& opt = {});

/// N points labeled by patterns and one permutation per generator.
struct QuotientSystem {
    int n = 1;
    int r = 0;
    int K = 2;
    std::vector<Pattern> labels;
    std::vector<std::vector<std::size_t>> perms;  // perms[i-1][v] = sigma_i(v)

    std::size_t size() const { return labels.size(); }
};

WeightsReport validate_quotient(const QuotientSystem& q);

QuotientSystem build_quotient(const CylinderWeights& w);
std::vector<QuotientSystem> components(const QuotientSystem& q);

struct PeriodicColoring {
    QuotientSystem quotient;
    std::size_t basepoint = 0;
};

/// Endpoint of the walk from `start` reading the letters left to right.
std::size_t walk(const QuotientSystem& q, std::size_t start, const ReducedWord& g);
int evaluate_lift(const PeriodicColoring& c, const ReducedWord& g);
/// Pattern of the lifted coloring on B_r(id) based at point v.
Pattern lift_pattern(const QuotientSystem& q, std::size_t v, int r);

CylinderWeights weights_from_periodic_coloring(const PeriodicColoring& c, int r);
CylinderWeights periodic_measure(const QuotientSystem& q, int r);
CylinderWeights periodic_measure(const QuotientSystem& q);

/// Max over radius-r patterns of |lambda(Z) - mu(Z)|.
mpq_class approximation_error(const CylinderWeights& lambda, const CylinderWeights& mu, int r);

struct Approximation {
    CylinderWeights rational;
    QuotientSystem quotient;
    std::vector<PeriodicColoring> colorings;
    std::vector<mpq_class> mixture;  // |V(Q_i)| / N
    CylinderWeights lambda;
    mpq_class error;
};

Approximation approximate(const CylinderWeights& mu, const mpq_class& eps, const RationalizeOptions& opt = {});

}  // namespace hypack

#pragma once

// Dense two-phase simplex over exact rationals with Bland's rule.

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hypack {

struct RationalLp {
    enum class Rel { le, eq, ge };
    struct Row {
        std::vector<std::pair<std::size_t, mpq_class>> terms;
        Rel rel = Rel::eq;
        mpq_class rhs;
    };

    std::size_t num_vars = 0;
    std::vector<mpq_class> objective;  // minimized; missing entries are zero
    std::vector<Row> rows;

    std::size_t add_var() { return num_vars++; }
    void add_row(std::vector<std::pair<std::size_t, mpq_class>> terms, Rel rel, mpq_class rhs) {
        rows.push_back({std::move(terms), rel, std::move(rhs)});
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<mpq_class> x;
    mpq_class objective;
};

/// Minimizes objective . x subject to the rows and x >= 0.
LpResult solve_lp(const RationalLp& lp);

}  // namespace hypack

#include "hypack/rational_lp.hpp"

#include <limits>

#include "hypack/errors.hpp"

namespace hypack {

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows, std::vector<mpq_class>(cols + 1)) {}

    mpq_class& at(std::size_t r, std::size_t c) { return a_[r][c]; }
    mpq_class& rhs(std::size_t r) { return a_[r][n_]; }
    std::vector<std::size_t>& basis() { return basis_; }

    // Runs Bland's rule on cost vector `cost` (length n_) restricted to
    // columns with allowed[c]. Returns false when unbounded.
    bool optimize(const std::vector<mpq_class>& cost, const std::vector<bool>& allowed) {
        for (;;) {
            // Reduced cost d_c = cost_c - sum_r cost_{basis r} a_rc.
            std::size_t enter = n_;
            for (std::size_t c = 0; c < n_ && enter == n_; ++c) {
                if (!allowed[c]) continue;
                mpq_class d = cost[c];
                for (std::size_t r = 0; r < m_; ++r)
                    if (sgn(a_[r][c]) != 0 && sgn(cost[basis_[r]]) != 0) d -= cost[basis_[r]] * a_[r][c];
                if (sgn(d) < 0) enter = c;
            }
            if (enter == n_) return true;
            std::size_t leave = m_;
            mpq_class best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (sgn(a_[r][enter]) <= 0) continue;
                mpq_class ratio = a_[r][n_] / a_[r][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const mpq_class p = a_[row][col];
        for (std::size_t c = 0; c <= n_; ++c)
            if (sgn(a_[row][c]) != 0) a_[row][c] /= p;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row || sgn(a_[r][col]) == 0) continue;
            const mpq_class f = a_[r][col];
            for (std::size_t c = 0; c <= n_; ++c)
                if (sgn(a_[row][c]) != 0) a_[r][c] -= f * a_[row][c];
        }
        basis_[row] = col;
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

private:
    std::size_t m_, n_;
    std::vector<std::vector<mpq_class>> a_;
    std::vector<std::size_t> basis_ = std::vector<std::size_t>(m_);
};

}  // namespace

LpResult solve_lp(const RationalLp& lp) {
    const std::size_t m = lp.rows.size();
    const std::size_t nv = lp.num_vars;
    std::size_t n_slack = 0, n_art = 0;
    for (const auto& row : lp.rows) {
        const bool neg = sgn(row.rhs) < 0;
        RationalLp::Rel rel = row.rel;
        if (neg && rel != RationalLp::Rel::eq) rel = rel == RationalLp::Rel::le ? RationalLp::Rel::ge : RationalLp::Rel::le;
        if (rel != RationalLp::Rel::eq) ++n_slack;
        if (rel != RationalLp::Rel::le) ++n_art;
    }
    const std::size_t n = nv + n_slack + n_art;
    Tableau t(m, n);
    std::size_t slack = nv, art = nv + n_slack;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = lp.rows[r];
        const bool neg = sgn(row.rhs) < 0;
        const int sign = neg ? -1 : 1;
        RationalLp::Rel rel = row.rel;
        if (neg && rel != RationalLp::Rel::eq) rel = rel == RationalLp::Rel::le ? RationalLp::Rel::ge : RationalLp::Rel::le;
        for (const auto& [var, coef] : row.terms) {
            if (var >= nv) throw DomainError("LP row references an unknown variable");
            t.at(r, var) += sign * coef;
        }
        t.rhs(r) = sign * row.rhs;
        if (rel == RationalLp::Rel::le) {
            t.at(r, slack) = 1;
            t.basis()[r] = slack++;
        } else {
            if (rel == RationalLp::Rel::ge) t.at(r, slack++) = -1;
            t.at(r, art) = 1;
            t.basis()[r] = art++;
        }
    }

    std::vector<bool> allowed(n, true);
    LpResult res;
    if (n_art > 0) {
        std::vector<mpq_class> phase1(n);
        for (std::size_t c = nv + n_slack; c < n; ++c) phase1[c] = 1;
        t.optimize(phase1, allowed);
        mpq_class infeas;
        for (std::size_t r = 0; r < m; ++r)
            if (t.basis()[r] >= nv + n_slack) infeas += t.rhs(r);
        if (sgn(infeas) != 0) {
            res.status = LpStatus::infeasible;
            return res;
        }
        // Pivot remaining (zero-level) artificials out where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis()[r] < nv + n_slack) continue;
            for (std::size_t c = 0; c < nv + n_slack; ++c)
                if (sgn(t.at(r, c)) != 0) {
                    t.pivot(r, c);
                    break;
                }
        }
        for (std::size_t c = nv + n_slack; c < n; ++c) allowed[c] = false;
    }
    std::vector<mpq_class> cost(n);
    for (std::size_t c = 0; c < nv && c < lp.objective.size(); ++c) cost[c] = lp.objective[c];
    if (!t.optimize(cost, allowed)) {
        res.status = LpStatus::unbounded;
        return res;
    }
    res.status = LpStatus::optimal;
    res.x.assign(nv, 0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis()[r] < nv) res.x[t.basis()[r]] = t.rhs(r);
    for (std::size_t c = 0; c < nv && c < lp.objective.size(); ++c) res.objective += lp.objective[c] * res.x[c];
    return res;
}

}  // namespace hypack

#pragma once

#include <map>
#include <vector>

#include "polymin/monomial_basis.hpp"
#include "polymin/polynomial.hpp"

namespace polymin {

/// One rewriting rule: the border monomial `leading` rewrites to `tail`,
/// i.e. the rule polynomial is `leading - tail` with leading coefficient 1.
struct RewriteRule {
    Monomial leading;
    Polynomial tail;
};

/// A rewriting family for a monomial set B: at most one rule per leading
/// monomial, every leading monomial in the border of B, every tail
/// supported inside B with degree(tail) <= degree(leading).
class RewritingFamily {
public:
    explicit RewritingFamily(MonomialBasis basis);

    const MonomialBasis& basis() const { return basis_; }
    const std::map<Monomial, Polynomial>& rules() const { return rules_; }
    int rule_count() const { return static_cast<int>(rules_.size()); }

    /// Validates the family invariants; throws Error on violation.
    void add_rule(const Monomial& leading, Polynomial tail);

    bool has_rule(const Monomial& leading) const { return rules_.count(leading) > 0; }
    const Polynomial& tail(const Monomial& leading) const;
    Polynomial rule_polynomial(const Monomial& leading) const;

    /// True when every border monomial of degree <= t has a rule.
    bool complete_in_degree(int t) const;

    int max_rule_degree() const;
    /// Largest coefficient magnitude over all rule polynomials (>= 1).
    double max_rule_coeff() const;

private:
    MonomialBasis basis_;
    std::map<Monomial, Polynomial> rules_;
};

/// Memoizing evaluator of the projection onto span(B) along the family.
///
/// Monomials in B are fixed, border monomials rewrite by their rule, and
/// deeper monomials split off the smallest variable index that lowers the
/// B-index. Holds a reference to the family; do not outlive it.
class NormalFormTable {
public:
    explicit NormalFormTable(const RewritingFamily& family);

    /// Throws CompletenessError if an uncovered border monomial is needed,
    /// Error if p exceeds the degree bound.
    Polynomial reduce(const Polynomial& p, int degree_bound);
    const Polynomial& reduce_monomial(const Monomial& m, int degree_bound);

private:
    int delta(const Monomial& m);

    const RewritingFamily& family_;
    std::map<Monomial, Polynomial> memo_;
    std::map<Monomial, int> delta_memo_;
};

/// pi_{F,B}(p) in degree <= t.
Polynomial normal_form(const RewritingFamily& family, const Polynomial& p, int t);

/// The C+(F) set in degree <= t: all m*f - m'*f' with m, m' in {0, 1, x_i}
/// such that either m*gamma(f) = m'*gamma(f') or m*gamma(f) lies in B with
/// m' = 0. Duplicates and zero polynomials are dropped.
std::vector<Polynomial> cplus_polynomials(const RewritingFamily& family, int t);

struct BorderBasisCheck {
    bool ok = false;
    double max_residual = 0.0;
};

/// True iff every C+(F) element of degree <= t projects to (numerically)
/// zero; the tolerance is relative to the largest rule coefficient.
BorderBasisCheck check_border_basis(const RewritingFamily& family, int t, double tol = 1e-8);

struct CompletionOptions {
    /// Pivot acceptance threshold, relative to the row maximum.
    double eps_pivot = 1e-9;
    /// Noise floor assigned to each input row (relative to its unit
    /// max-norm normalization). The elimination tracks first-order error
    /// growth through every reduction; rows and pivots that sink below the
    /// accumulated estimate are treated as zero.
    double zero_tol = 1e-12;
};

struct Completion {
    RewritingFamily family;
    MonomialBasis basis;
};

/// Degree-bounded border-basis completion.
///
/// Starting from the full monomial set of degree <= degree_bound, reduces
/// the generators and all single-variable prolongations of existing rules
/// to a fixed point. Each nonzero reduced row becomes a rule whose leading
/// monomial is the choosable monomial of maximal degree with the largest
/// absolute coefficient; the candidate basis shrinks accordingly and is
/// kept connected to 1 throughout.
///
/// Throws UnitIdealError when the generators span the whole ring.
Completion complete_in_degree(const std::vector<Polynomial>& generators, int degree_bound,
                              const CompletionOptions& options = {});

} // namespace polymin

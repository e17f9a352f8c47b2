#pragma once

#include <vector>

#include "polymin/monomial.hpp"

namespace polymin {

/// An ordered (graded-lex ascending) set of monomials.
///
/// Most uses require the set to be connected to 1: it contains 1 and every
/// other member is a variable times another member. Construction does not
/// enforce this; callers that need it check `is_connected_to_1`.
class MonomialBasis {
public:
    MonomialBasis(int n_vars, std::vector<Monomial> monomials);

    static MonomialBasis all_monomials_up_to(int n_vars, int degree);

    int n_vars() const { return n_vars_; }
    int size() const { return static_cast<int>(monomials_.size()); }
    bool empty() const { return monomials_.empty(); }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    const Monomial& operator[](int i) const { return monomials_[static_cast<std::size_t>(i)]; }

    bool contains(const Monomial& m) const;
    /// -1 when absent.
    int index_of(const Monomial& m) const;
    int max_degree() const;

    bool is_connected_to_1() const;

    MonomialBasis restricted_to_degree(int t) const;

    /// B+ = B ∪ x_0 B ∪ ... ∪ x_{n-1} B.
    MonomialBasis prolonged() const;
    /// ∂B = B+ \ B.
    std::vector<Monomial> border() const;

    /// B-index δ_B(m): smallest k with m ∈ B^[k]. Requires 1 ∈ B.
    int b_index(const Monomial& m) const;

    bool operator==(const MonomialBasis& other) const {
        return n_vars_ == other.n_vars_ && monomials_ == other.monomials_;
    }

private:
    int n_vars_;
    std::vector<Monomial> monomials_; // sorted, unique
};

inline MonomialBasis prolong(const MonomialBasis& basis) { return basis.prolonged(); }
inline int b_index(const MonomialBasis& basis, const Monomial& m) { return basis.b_index(m); }

} // namespace polymin

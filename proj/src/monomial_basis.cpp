#include "polymin/monomial_basis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "polymin/errors.hpp"
#include "polymin/polynomial.hpp"

namespace polymin {

MonomialBasis::MonomialBasis(int n_vars, std::vector<Monomial> monomials)
    : n_vars_(n_vars), monomials_(std::move(monomials)) {
    std::sort(monomials_.begin(), monomials_.end());
    monomials_.erase(std::unique(monomials_.begin(), monomials_.end()), monomials_.end());
}

MonomialBasis MonomialBasis::all_monomials_up_to(int n_vars, int degree) {
    std::vector<Monomial> out;
    std::vector<int> exps(static_cast<std::size_t>(n_vars), 0);
    // Enumerate exponent vectors with total degree <= degree.
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == n_vars) {
            out.emplace_back(exps);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            exps[static_cast<std::size_t>(var)] = e;
            self(self, var + 1, remaining - e);
        }
        exps[static_cast<std::size_t>(var)] = 0;
    };
    rec(rec, 0, degree);
    return MonomialBasis(n_vars, std::move(out));
}

bool MonomialBasis::contains(const Monomial& m) const {
    return std::binary_search(monomials_.begin(), monomials_.end(), m);
}

int MonomialBasis::index_of(const Monomial& m) const {
    auto it = std::lower_bound(monomials_.begin(), monomials_.end(), m);
    if (it == monomials_.end() || !(*it == m)) return -1;
    return static_cast<int>(it - monomials_.begin());
}

int MonomialBasis::max_degree() const {
    return monomials_.empty() ? kDegreeNegInf : monomials_.back().degree();
}

bool MonomialBasis::is_connected_to_1() const {
    if (monomials_.empty() || !monomials_.front().is_one()) return false;
    // Ascending degree order: a valid parent is always seen before its child.
    std::set<Monomial> seen;
    for (const auto& m : monomials_) {
        if (m.is_one()) {
            seen.insert(m);
            continue;
        }
        bool reachable = false;
        for (int i = 0; i < n_vars_ && !reachable; ++i)
            if (m.exponent(i) > 0 && seen.count(m.divided_by_variable(i)))
                reachable = true;
        if (!reachable) return false;
        seen.insert(m);
    }
    return true;
}

MonomialBasis MonomialBasis::restricted_to_degree(int t) const {
    std::vector<Monomial> out;
    for (const auto& m : monomials_)
        if (m.degree() <= t) out.push_back(m);
    return MonomialBasis(n_vars_, std::move(out));
}

MonomialBasis MonomialBasis::prolonged() const {
    std::vector<Monomial> out = monomials_;
    for (const auto& m : monomials_)
        for (int i = 0; i < n_vars_; ++i) out.push_back(m.times_variable(i));
    return MonomialBasis(n_vars_, std::move(out));
}

std::vector<Monomial> MonomialBasis::border() const {
    MonomialBasis plus = prolonged();
    std::vector<Monomial> out;
    for (const auto& m : plus.monomials())
        if (!contains(m)) out.push_back(m);
    return out;
}

int MonomialBasis::b_index(const Monomial& m) const {
    std::map<Monomial, int> memo;
    auto rec = [&](auto&& self, const Monomial& mono) -> int {
        if (contains(mono)) return 0;
        if (mono.is_one())
            throw Error("b_index requires 1 to be a member of the basis");
        auto it = memo.find(mono);
        if (it != memo.end()) return it->second;
        int best = -1;
        for (int i = 0; i < n_vars_; ++i) {
            if (mono.exponent(i) == 0) continue;
            int sub = self(self, mono.divided_by_variable(i));
            if (best < 0 || sub < best) best = sub;
        }
        memo.emplace(mono, best + 1);
        return best + 1;
    };
    return rec(rec, m);
}

} // namespace polymin

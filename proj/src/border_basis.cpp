#include "polymin/border_basis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "polymin/errors.hpp"

namespace polymin {

// ---------------------------------------------------------------------------
// RewritingFamily

RewritingFamily::RewritingFamily(MonomialBasis basis) : basis_(std::move(basis)) {}

void RewritingFamily::add_rule(const Monomial& leading, Polynomial tail) {
    if (basis_.contains(leading))
        throw Error("rule leading monomial lies in the basis: " + to_string(leading));
    bool in_border = false;
    for (int i = 0; i < basis_.n_vars() && !in_border; ++i)
        if (leading.exponent(i) > 0 && basis_.contains(leading.divided_by_variable(i)))
            in_border = true;
    if (!in_border)
        throw Error("rule leading monomial is not in the border: " + to_string(leading));
    if (!tail.is_zero() && tail.degree() > leading.degree())
        throw Error("rule is not graded at leading monomial " + to_string(leading));
    for (const auto& [m, c] : tail.terms())
        if (!basis_.contains(m))
            throw Error("rule tail leaves the basis span at " + to_string(m));
    if (!rules_.emplace(leading, std::move(tail)).second)
        throw Error("duplicate rule for leading monomial " + to_string(leading));
}

const Polynomial& RewritingFamily::tail(const Monomial& leading) const {
    auto it = rules_.find(leading);
    if (it == rules_.end())
        throw CompletenessError(to_string(leading));
    return it->second;
}

Polynomial RewritingFamily::rule_polynomial(const Monomial& leading) const {
    return Polynomial::from_term(leading, 1.0) - tail(leading);
}

bool RewritingFamily::complete_in_degree(int t) const {
    for (const auto& m : basis_.border())
        if (m.degree() <= t && !rules_.count(m)) return false;
    return true;
}

int RewritingFamily::max_rule_degree() const {
    int d = kDegreeNegInf;
    for (const auto& [lead, tail] : rules_) d = std::max(d, lead.degree());
    return d;
}

double RewritingFamily::max_rule_coeff() const {
    double m = rules_.empty() ? 0.0 : 1.0; // leading coefficients are 1
    for (const auto& [lead, tail] : rules_) m = std::max(m, tail.max_abs_coeff());
    return m;
}

// ---------------------------------------------------------------------------
// NormalFormTable

NormalFormTable::NormalFormTable(const RewritingFamily& family) : family_(family) {}

int NormalFormTable::delta(const Monomial& m) {
    if (family_.basis().contains(m)) return 0;
    auto it = delta_memo_.find(m);
    if (it != delta_memo_.end()) return it->second;
    if (m.is_one()) throw Error("monomial basis does not contain 1");
    int best = -1;
    for (int i = 0; i < m.n_vars(); ++i) {
        if (m.exponent(i) == 0) continue;
        int sub = delta(m.divided_by_variable(i));
        if (best < 0 || sub < best) best = sub;
    }
    delta_memo_.emplace(m, best + 1);
    return best + 1;
}

const Polynomial& NormalFormTable::reduce_monomial(const Monomial& m, int degree_bound) {
    if (m.degree() > degree_bound)
        throw Error("normal form degree bound exceeded at " + to_string(m));
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;

    Polynomial out(m.n_vars());
    if (family_.basis().contains(m)) {
        out = Polynomial::from_term(m, 1.0);
    } else if (delta(m) == 1) {
        if (!family_.has_rule(m)) throw CompletenessError(to_string(m));
        out = family_.tail(m);
    } else {
        const int k = delta(m);
        int i0 = -1;
        for (int i = 0; i < m.n_vars(); ++i) {
            if (m.exponent(i) == 0) continue;
            if (delta(m.divided_by_variable(i)) == k - 1) {
                i0 = i;
                break;
            }
        }
        const Polynomial inner = reduce_monomial(m.divided_by_variable(i0), degree_bound);
        for (const auto& [b, c] : inner.terms())
            out += reduce_monomial(b.times_variable(i0), degree_bound) * c;
        out.prune();
    }
    return memo_.emplace(m, std::move(out)).first->second;
}

Polynomial NormalFormTable::reduce(const Polynomial& p, int degree_bound) {
    Polynomial out(p.n_vars());
    for (const auto& [m, c] : p.terms())
        out += reduce_monomial(m, degree_bound) * c;
    return out.prune();
}

Polynomial normal_form(const RewritingFamily& family, const Polynomial& p, int t) {
    NormalFormTable table(family);
    return table.reduce(p, t);
}

// ---------------------------------------------------------------------------
// C+(F)

std::vector<Polynomial> cplus_polynomials(const RewritingFamily& family, int t) {
    const MonomialBasis& basis = family.basis();
    const int n = basis.n_vars();
    std::vector<Monomial> mults;
    mults.push_back(Monomial::one(n));
    for (int i = 0; i < n; ++i) mults.push_back(Monomial::variable(n, i));

    std::vector<Polynomial> out;
    const auto& rules = family.rules();
    for (auto it = rules.begin(); it != rules.end(); ++it) {
        for (auto jt = std::next(it); jt != rules.end(); ++jt) {
            for (const auto& m : mults) {
                for (const auto& mp : mults) {
                    if (!(m * it->first == mp * jt->first)) continue;
                    Polynomial c = family.rule_polynomial(it->first).times_monomial(m) -
                                   family.rule_polynomial(jt->first).times_monomial(mp);
                    if (c.is_zero() || c.degree() > t) continue;
                    out.push_back(std::move(c));
                }
            }
        }
        for (const auto& m : mults) {
            if (!basis.contains(m * it->first)) continue;
            Polynomial c = family.rule_polynomial(it->first).times_monomial(m);
            if (c.degree() > t) continue;
            out.push_back(std::move(c));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Polynomial& a, const Polynomial& b) { return a.terms() < b.terms(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BorderBasisCheck check_border_basis(const RewritingFamily& family, int t, double tol) {
    NormalFormTable table(family);
    BorderBasisCheck result;
    for (const auto& c : cplus_polynomials(family, t)) {
        Polynomial r = table.reduce(c, t);
        result.max_residual = std::max(result.max_residual, r.max_abs_coeff());
    }
    result.ok = result.max_residual <= tol * std::max(1.0, family.max_rule_coeff());
    return result;
}

// ---------------------------------------------------------------------------
// Completion

namespace {

struct InProgressGuard {
    InProgressGuard(std::set<Monomial>& set, const Monomial& m) : set_(set), m_(m) {
        set_.insert(m_);
    }
    ~InProgressGuard() { set_.erase(m_); }
    std::set<Monomial>& set_;
    const Monomial& m_;
};

class CompletionEngine {
    struct Row {
        Polynomial poly;
        double noise = 0.0;
    };
    static constexpr double kMachineEps = 1e-15;
    static constexpr double kNoiseFactor = 10.0;

public:
    CompletionEngine(const std::vector<Polynomial>& generators, int degree_bound,
                     const CompletionOptions& options)
        : n_(generators.empty() ? 0 : generators.front().n_vars()),
          bound_(degree_bound),
          options_(options) {
        if (generators.empty()) throw Error("completion requires at least one generator");
        universe_ = MonomialBasis::all_monomials_up_to(n_, bound_).monomials();
        for (const auto& m : universe_) basis_.insert(m);
        std::vector<Polynomial> rows;
        for (const auto& g : generators) {
            Polynomial p = g;
            p.prune();
            if (p.is_zero()) continue;
            if (p.degree() > bound_)
                throw Error("completion degree bound is below a generator degree");
            rows.push_back(std::move(p));
        }
        std::sort(rows.begin(), rows.end(), [](const Polynomial& a, const Polynomial& b) {
            if (a.degree() != b.degree()) return a.degree() < b.degree();
            return a.terms() < b.terms();
        });
        for (auto& p : rows) pending_.push_back(Row{std::move(p), 0.0});
    }

    Completion run() {
        for (;;) {
            const std::uint64_t before = version_;
            drain_pending();
            // Full prolongation sweep; a sweep that leaves the family
            // untouched certifies every C+ element reduces to zero.
            std::vector<Monomial> leads;
            leads.reserve(rules_.size());
            for (const auto& [lead, tail] : rules_) leads.push_back(lead);
            for (const auto& lead : leads) {
                if (!rules_.count(lead)) continue; // removed by hygiene
                if (lead.degree() + 1 > bound_) continue;
                const Polynomial rule_poly =
                    Polynomial::from_term(lead, 1.0) - rules_.at(lead);
                const double rn = rule_noise_.count(lead) ? rule_noise_.at(lead) : 0.0;
                for (int i = 0; i < n_; ++i)
                    pending_.push_back(
                        Row{rule_poly.times_monomial(Monomial::variable(n_, i)), rn});
            }
            drain_pending();
            if (version_ == before && pending_.empty()) break;
        }
        return finish();
    }

private:
    // Batch Gaussian elimination over the queued rows with a globally
    // stable pivot choice: among every row's choosable monomials of maximal
    // degree, the largest coefficient relative to its row wins. A pivot is
    // admissible only when the remaining monomials of its row lie inside
    // the basis, so rule tails always stay in the basis span. Rows whose
    // candidates all fall below eps_pivot of the row maximum are declared
    // zero once no further reduction changes them; rows waiting on border
    // coverage are parked and retried on the next sweep.
    void drain_pending() {
        std::vector<Row> rows;
        for (auto& r : leftover_) pending_.push_back(std::move(r));
        leftover_.clear();
        const auto absorb = [&]() {
            while (!pending_.empty()) {
                Row p = std::move(pending_.front());
                pending_.pop_front();
                const double scale = p.poly.max_abs_coeff();
                if (scale == 0.0) continue;
                Row r = reduce(p.poly * (1.0 / scale));
                r.noise += p.noise / scale + options_.zero_tol;
                r.poly.prune();
                if (r.poly.max_abs_coeff() > kNoiseFactor * r.noise) rows.push_back(std::move(r));
            }
        };
        absorb();
        while (!rows.empty()) {
            for (const auto& r : rows)
                if (r.poly.degree() == 0) throw UnitIdealError(r.poly.max_abs_coeff());

            int best_row = -1;
            Monomial best_monomial(n_);
            double best_coeff = 0.0;
            double best_score = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const Polynomial& r = rows[i].poly;
                const double rmax = r.max_abs_coeff();
                const int d = r.degree();
                int outside = 0; // monomials outside the basis
                for (const auto& [m, c] : r.terms())
                    if (!basis_.count(m)) ++outside;
                for (const auto& [m, c] : r.terms()) {
                    if (m.degree() != d) continue;
                    const bool member = basis_.count(m) > 0;
                    const bool uncovered = !member && in_border(m) && !rules_.count(m);
                    if (!member && !uncovered) continue;
                    // the tail must stay inside the basis span
                    if (outside > (member ? 0 : 1)) continue;
                    const double score = std::abs(c) / rmax;
                    if (score <= options_.eps_pivot) continue;
                    // a pivot below the row's accumulated error is noise
                    if (std::abs(c) <= kNoiseFactor * rows[i].noise) continue;
                    if (score > best_score ||
                        (score == best_score && best_monomial < m)) {
                        best_row = static_cast<int>(i);
                        best_monomial = m;
                        best_coeff = c;
                        best_score = score;
                    }
                }
            }
            if (best_row < 0) {
                // Rows blocked on uncovered monomials wait for the next
                // sweep; rows below the pivot threshold are declared zero.
                for (auto& r : rows) {
                    for (const auto& [m, c] : r.poly.terms())
                        if (!basis_.count(m)) {
                            leftover_.push_back(std::move(r));
                            break;
                        }
                }
                return;
            }

            Row& source = rows[static_cast<std::size_t>(best_row)];
            Polynomial tail(n_);
            for (const auto& [m, c] : source.poly.terms())
                if (!(m == best_monomial)) tail.add_term(m, -c / best_coeff);
            tail.prune();
            const double tail_noise = source.noise / std::abs(best_coeff);
            rows.erase(rows.begin() + best_row);

            pivots_.insert(best_monomial);
            rules_.insert_or_assign(best_monomial, std::move(tail));
            rule_noise_.insert_or_assign(best_monomial, tail_noise);
            recompute_basis();
            rule_hygiene();
            bump();

            absorb();
            std::vector<Row> next;
            next.reserve(rows.size());
            for (auto& r : rows) {
                Row rr = reduce(r.poly);
                rr.noise += r.noise;
                rr.poly.prune();
                if (rr.poly.max_abs_coeff() > kNoiseFactor * rr.noise)
                    next.push_back(std::move(rr));
            }
            rows = std::move(next);
        }
    }

    // basis = connected closure of (universe \ pivots); shrinks monotonically.
    void recompute_basis() {
        basis_.clear();
        for (const auto& m : universe_) {
            if (pivots_.count(m)) continue;
            if (m.is_one()) {
                basis_.insert(m);
                continue;
            }
            for (int i = 0; i < n_; ++i) {
                if (m.exponent(i) > 0 && basis_.count(m.divided_by_variable(i))) {
                    basis_.insert(m);
                    break;
                }
            }
        }
    }

    bool in_border(const Monomial& m) const {
        for (int i = 0; i < n_; ++i)
            if (m.exponent(i) > 0 && basis_.count(m.divided_by_variable(i))) return true;
        return false;
    }

    bool tail_clean(const Polynomial& tail) const {
        for (const auto& [m, c] : tail.terms())
            if (!basis_.count(m)) return false;
        return true;
    }

    void rule_hygiene() {
        // Rules whose leading monomial left the border are dissolved back
        // into the queue; their content re-enters through reduction.
        for (auto it = rules_.begin(); it != rules_.end();) {
            if (!in_border(it->first)) {
                pending_.push_back(
                    Row{Polynomial::from_term(it->first, 1.0) - it->second,
                        rule_noise_.count(it->first) ? rule_noise_.at(it->first) : 0.0});
                it = rules_.erase(it);
                bump();
            } else {
                ++it;
            }
        }
        // Tails referencing monomials that left the basis are re-reduced in
        // place; the reduction cuts reference cycles by leaving the
        // offending monomial unreduced, so a few sweeps may be needed.
        for (int sweep = 0; sweep < 50; ++sweep) {
            bool changed = false;
            for (auto& [lead, tail] : rules_) {
                if (tail_clean(tail)) continue;
                bump();
                Row nt = reduce(tail);
                nt.poly.prune();
                if (!(nt.poly == tail)) {
                    tail = std::move(nt.poly);
                    rule_noise_[lead] += nt.noise;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        // Last resort for tails stuck on a reference cycle.
        for (auto it = rules_.begin(); it != rules_.end();) {
            if (!tail_clean(it->second)) {
                pending_.push_back(
                    Row{Polynomial::from_term(it->first, 1.0) - it->second,
                        rule_noise_.count(it->first) ? rule_noise_.at(it->first) : 0.0});
                it = rules_.erase(it);
                bump();
            } else {
                ++it;
            }
        }
    }

    void bump() {
        ++version_;
        memo_.clear();
        delta_memo_.clear();
    }

    int delta(const Monomial& m) {
        if (basis_.count(m)) return 0;
        auto it = delta_memo_.find(m);
        if (it != delta_memo_.end()) return it->second;
        if (m.is_one()) throw UnitIdealError();
        int best = -1;
        for (int i = 0; i < n_; ++i) {
            if (m.exponent(i) == 0) continue;
            int sub = delta(m.divided_by_variable(i));
            if (best < 0 || sub < best) best = sub;
        }
        delta_memo_.emplace(m, best + 1);
        return best + 1;
    }

    Row reduce(const Polynomial& p) {
        Row out{Polynomial(n_), 0.0};
        for (const auto& [m, c] : p.terms()) {
            const Row r = reduce_monomial(m);
            out.poly += r.poly * c;
            out.noise += std::abs(c) * (r.noise + kMachineEps * r.poly.max_abs_coeff());
        }
        out.poly.prune();
        return out;
    }

    // Tolerant projection with first-order error tracking: border
    // monomials without a rule (and deeper monomials stuck behind one) are
    // returned unreduced; they become pivot candidates of the row being
    // processed. Cyclic references are cut by returning the revisited
    // monomial unreduced (not memoized).
    Row reduce_monomial(const Monomial& m) {
        auto it = memo_.find(m);
        if (it != memo_.end()) return it->second;
        if (in_progress_.count(m)) return Row{Polynomial::from_term(m, 1.0), 0.0};
        InProgressGuard guard(in_progress_, m);

        Row out{Polynomial(n_), 0.0};
        if (auto rt = rules_.find(m); rt != rules_.end()) {
            const double rn = rule_noise_.count(m) ? rule_noise_.at(m) : 0.0;
            if (tail_clean(rt->second)) {
                out = Row{rt->second, rn};
            } else {
                out = reduce(rt->second);
                out.noise += rn;
            }
        } else if (basis_.count(m)) {
            out = Row{Polynomial::from_term(m, 1.0), 0.0};
        } else {
            const int k = delta(m);
            if (k == 1) {
                return Row{Polynomial::from_term(m, 1.0), 0.0}; // uncovered border
            }
            int i0 = -1;
            for (int i = 0; i < n_; ++i) {
                if (m.exponent(i) == 0) continue;
                if (delta(m.divided_by_variable(i)) == k - 1) {
                    i0 = i;
                    break;
                }
            }
            const Monomial quotient = m.divided_by_variable(i0);
            const Row inner = reduce_monomial(quotient);
            if (inner.poly.term_count() == 1 && inner.poly.coeff(quotient) == 1.0)
                return Row{Polynomial::from_term(m, 1.0), 0.0}; // stuck behind the border
            double amplification = 1.0;
            for (const auto& [b, c] : inner.poly.terms()) {
                const Row piece = reduce_monomial(b.times_variable(i0));
                out.poly += piece.poly * c;
                out.noise += std::abs(c) * piece.noise;
                amplification = std::max(amplification, piece.poly.max_abs_coeff());
            }
            out.noise += inner.noise * amplification;
            out.poly.prune();
        }
        return memo_.emplace(m, out).first->second;
    }

    Completion finish() {
        std::vector<Monomial> kept(basis_.begin(), basis_.end());
        MonomialBasis basis(n_, std::move(kept));
        RewritingFamily family(basis);
        for (const auto& [lead, tail] : rules_) family.add_rule(lead, tail);
        if (!family.complete_in_degree(bound_))
            throw NumericalError("completion left the border partially uncovered");
        return Completion{std::move(family), std::move(basis)};
    }

    int n_;
    int bound_;
    CompletionOptions options_;
    std::vector<Monomial> universe_;
    std::set<Monomial> pivots_;
    std::set<Monomial> basis_;
    std::map<Monomial, Polynomial> rules_;
    std::map<Monomial, double> rule_noise_;
    std::deque<Row> pending_;
    std::vector<Row> leftover_;
    std::uint64_t version_ = 0;
    std::map<Monomial, Row> memo_;
    std::map<Monomial, int> delta_memo_;
    std::set<Monomial> in_progress_;
};

} // namespace

Completion complete_in_degree(const std::vector<Polynomial>& generators, int degree_bound,
                              const CompletionOptions& options) {
    return CompletionEngine(generators, degree_bound, options).run();
}

} // namespace polymin

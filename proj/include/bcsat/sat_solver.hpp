#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bcsat/cnf.hpp"

namespace bcsat {

enum class SolveStatus { Sat, Unsat, Timeout, SolverError };

inline const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Sat: return "SATISFIABLE";
    case SolveStatus::Unsat: return "UNSATISFIABLE";
    case SolveStatus::Timeout: return "TIMEOUT";
    case SolveStatus::SolverError: return "SOLVER_ERROR";
    }
    return "?";
}

struct SolveOutcome {
    SolveStatus status = SolveStatus::SolverError;
    std::optional<Assignment> model; // present iff status == Sat
    double seconds = 0.0;
    std::string detail; // diagnostics on SolverError
};

// Complete CDCL solver: two-watched-literal propagation, first-UIP clause
// learning, exponential var activities with phase saving, Luby restarts and
// activity/LBD-based learned-clause deletion. Deterministic for a given
// formula (no randomization; all ties break on variable index).
//
// This is deliberately self-contained so the pipeline works without an
// external solver; solve.hpp can delegate to one when configured.
class CdclSolver {
public:
    explicit CdclSolver(const CnfFormula& f) {
        n_vars_ = f.n_vars;
        value_.assign(static_cast<std::size_t>(n_vars_), -1);
        level_.assign(static_cast<std::size_t>(n_vars_), 0);
        reason_.assign(static_cast<std::size_t>(n_vars_), -1);
        activity_.assign(static_cast<std::size_t>(n_vars_), 0.0);
        phase_.assign(static_cast<std::size_t>(n_vars_), 0);
        seen_.assign(static_cast<std::size_t>(n_vars_), 0);
        heap_pos_.assign(static_cast<std::size_t>(n_vars_), -1);
        watches_.assign(static_cast<std::size_t>(2 * n_vars_), {});
        trail_.reserve(static_cast<std::size_t>(n_vars_));
        for (int v = 0; v < n_vars_; ++v) heap_push(v);
        for (const auto& cl : f.clauses) {
            if (!ok_) break;
            std::vector<int> lits;
            lits.reserve(cl.size());
            for (int l : cl) lits.push_back(l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1);
            if (lits.empty()) {
                ok_ = false;
            } else if (lits.size() == 1) {
                if (lit_false(lits[0]))
                    ok_ = false;
                else if (!lit_true(lits[0]))
                    enqueue(lits[0], -1);
            } else {
                attach(add_clause(std::move(lits), false));
            }
        }
    }

    SolveOutcome solve(double timeout_s) {
        auto start = std::chrono::steady_clock::now();
        auto finish = [&](SolveStatus st, std::string detail = {}) {
            SolveOutcome out;
            out.status = st;
            out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                              .count();
            out.detail = std::move(detail);
            if (st == SolveStatus::Sat) {
                Assignment a(static_cast<std::size_t>(n_vars_), false);
                for (int v = 0; v < n_vars_; ++v) a[static_cast<std::size_t>(v)] = value_[v] == 1;
                out.model = std::move(a);
            }
            return out;
        };
        const bool has_deadline = timeout_s > 0;
        const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                          std::chrono::duration<double>(has_deadline ? timeout_s : 0));
        if (!ok_) return finish(SolveStatus::Unsat);
        if (propagate() != -1) return finish(SolveStatus::Unsat);

        std::uint64_t restart_count = 0;
        std::uint64_t conflicts_until_restart = restart_interval_ * luby(restart_count);
        std::vector<int> learnt;
        while (true) {
            int confl = propagate();
            if (confl != -1) {
                if (decision_level() == 0) return finish(SolveStatus::Unsat);
                ++conflicts_;
                int bt_level = 0;
                analyze(confl, learnt, bt_level);
                backtrack(bt_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], -1);
                } else {
                    int cid = add_clause(learnt, true);
                    attach(cid);
                    enqueue(learnt[0], cid);
                }
                decay_activities();
                if (conflicts_until_restart > 0) --conflicts_until_restart;
                if (learned_count_ >= max_learned_) reduce_learned();
                if ((conflicts_ & 2047) == 0 && has_deadline &&
                    std::chrono::steady_clock::now() >= deadline)
                    return finish(SolveStatus::Timeout);
            } else {
                if (conflicts_until_restart == 0) {
                    ++restart_count;
                    conflicts_until_restart = restart_interval_ * luby(restart_count);
                    if (decision_level() > 0) {
                        backtrack(0);
                        continue;
                    }
                }
                int v = pick_branch_var();
                if (v == -1) return finish(SolveStatus::Sat);
                trail_lim_.push_back(static_cast<int>(trail_.size()));
                enqueue(phase_[v] ? 2 * v : 2 * v + 1, -1);
            }
        }
    }

    std::uint64_t conflicts() const { return conflicts_; }

private:
    struct Clause {
        std::vector<int> lits;
        double act = 0.0;
        int lbd = 0;
        bool learned = false;
        bool deleted = false;
    };

    // literal encoding: positive x -> 2(x-1), negative -> 2(x-1)+1
    bool lit_true(int l) const { return value_[l >> 1] == ((l & 1) ? 0 : 1); }
    bool lit_false(int l) const { return value_[l >> 1] == ((l & 1) ? 1 : 0); }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    int add_clause(std::vector<int> lits, bool learned) {
        int id = static_cast<int>(clauses_.size());
        Clause c;
        c.lits = std::move(lits);
        c.learned = learned;
        if (learned) {
            c.act = clause_inc_;
            c.lbd = compute_lbd(c.lits);
            ++learned_count_;
        }
        clauses_.push_back(std::move(c));
        return id;
    }

    void attach(int cid) {
        const auto& lits = clauses_[static_cast<std::size_t>(cid)].lits;
        watches_[static_cast<std::size_t>(lits[0])].push_back(cid);
        watches_[static_cast<std::size_t>(lits[1])].push_back(cid);
    }

    int compute_lbd(const std::vector<int>& lits) {
        int lbd = 0;
        for (int l : lits) {
            int lev = level_[l >> 1];
            if (lev == 0) continue;
            bool fresh = true;
            for (int k : lits) {
                if (k == l) break;
                if (level_[k >> 1] == lev) {
                    fresh = false;
                    break;
                }
            }
            if (fresh) ++lbd;
        }
        return lbd;
    }

    void enqueue(int l, int reason) {
        int v = l >> 1;
        value_[v] = (l & 1) ? 0 : 1;
        phase_[v] = value_[v];
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
    }

    int propagate() {
        while (qhead_ < trail_.size()) {
            int p = trail_[qhead_++];
            int fp = p ^ 1; // literal made false
            auto& ws = watches_[static_cast<std::size_t>(fp)];
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                int cid = ws[i++];
                auto& lits = clauses_[static_cast<std::size_t>(cid)].lits;
                if (lits[0] == fp) std::swap(lits[0], lits[1]);
                if (lit_true(lits[0])) {
                    ws[j++] = cid;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (!lit_false(lits[k])) {
                        std::swap(lits[1], lits[k]);
                        watches_[static_cast<std::size_t>(lits[1])].push_back(cid);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = cid;
                if (lit_false(lits[0])) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead_ = trail_.size();
                    return cid;
                }
                enqueue(lits[0], cid);
            }
            ws.resize(j);
        }
        return -1;
    }

    void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
        learnt.assign(1, -1);
        int counter = 0;
        int p = -1;
        std::size_t idx = trail_.size();
        while (true) {
            Clause& c = clauses_[static_cast<std::size_t>(confl)];
            if (c.learned) bump_clause(confl);
            for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
                int q = c.lits[k];
                int v = q >> 1;
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= decision_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            do {
                p = trail_[--idx];
            } while (!seen_[p >> 1]);
            seen_[p >> 1] = 0;
            --counter;
            if (counter == 0) break;
            confl = reason_[p >> 1];
        }
        learnt[0] = p ^ 1;
        if (learnt.size() == 1) {
            bt_level = 0;
        } else {
            std::size_t max_i = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k)
                if (level_[learnt[k] >> 1] > level_[learnt[max_i] >> 1]) max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[learnt[1] >> 1];
        }
        for (int q : learnt) seen_[q >> 1] = 0;
    }

    void backtrack(int target) {
        if (decision_level() <= target) return;
        std::size_t keep = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(target)]);
        for (std::size_t i = trail_.size(); i > keep; --i) {
            int v = trail_[i - 1] >> 1;
            value_[v] = -1;
            reason_[v] = -1;
            if (heap_pos_[v] == -1) heap_push(v);
        }
        trail_.resize(keep);
        qhead_ = keep;
        trail_lim_.resize(static_cast<std::size_t>(target));
    }

    int pick_branch_var() {
        while (!heap_.empty()) {
            int v = heap_top_pop();
            if (value_[v] == -1) return v;
        }
        return -1;
    }

    void bump_var(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (int u = 0; u < n_vars_; ++u) activity_[u] *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[v] != -1) heap_up(heap_pos_[v]);
    }

    void bump_clause(int cid) {
        Clause& c = clauses_[static_cast<std::size_t>(cid)];
        c.act += clause_inc_;
        if (c.act > 1e20) {
            for (auto& cl : clauses_)
                if (cl.learned) cl.act *= 1e-20;
            clause_inc_ *= 1e-20;
        }
    }

    void decay_activities() {
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
    }

    bool clause_locked(int cid) const {
        const Clause& c = clauses_[static_cast<std::size_t>(cid)];
        return reason_[c.lits[0] >> 1] == cid && lit_true(c.lits[0]);
    }

    void reduce_learned() {
        std::vector<int> cands;
        for (int cid = 0; cid < static_cast<int>(clauses_.size()); ++cid) {
            const Clause& c = clauses_[static_cast<std::size_t>(cid)];
            if (c.learned && !c.deleted && c.lbd > 2 && !clause_locked(cid))
                cands.push_back(cid);
        }
        std::sort(cands.begin(), cands.end(), [&](int a, int b) {
            const Clause& ca = clauses_[static_cast<std::size_t>(a)];
            const Clause& cb = clauses_[static_cast<std::size_t>(b)];
            if (ca.lbd != cb.lbd) return ca.lbd < cb.lbd;
            if (ca.act != cb.act) return ca.act > cb.act;
            return a < b;
        });
        for (std::size_t i = cands.size() / 2; i < cands.size(); ++i) {
            Clause& c = clauses_[static_cast<std::size_t>(cands[i])];
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
            --learned_count_;
        }
        for (auto& ws : watches_) ws.clear();
        for (int cid = 0; cid < static_cast<int>(clauses_.size()); ++cid)
            if (!clauses_[static_cast<std::size_t>(cid)].deleted) attach(cid);
        max_learned_ = max_learned_ + max_learned_ / 2;
    }

    // indexed max-heap over activity, ties to the smaller variable
    bool heap_before(int a, int b) const {
        if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
        return a < b;
    }
    void heap_push(int v) {
        heap_pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_pos_[v]);
    }
    void heap_up(int i) {
        int v = heap_[static_cast<std::size_t>(i)];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!heap_before(v, heap_[static_cast<std::size_t>(parent)])) break;
            heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(parent)];
            heap_pos_[heap_[static_cast<std::size_t>(i)]] = i;
            i = parent;
        }
        heap_[static_cast<std::size_t>(i)] = v;
        heap_pos_[v] = i;
    }
    void heap_down(int i) {
        int v = heap_[static_cast<std::size_t>(i)];
        int n = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n &&
                heap_before(heap_[static_cast<std::size_t>(child + 1)],
                            heap_[static_cast<std::size_t>(child)]))
                ++child;
            if (!heap_before(heap_[static_cast<std::size_t>(child)], v)) break;
            heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(child)];
            heap_pos_[heap_[static_cast<std::size_t>(i)]] = i;
            i = child;
        }
        heap_[static_cast<std::size_t>(i)] = v;
        heap_pos_[v] = i;
    }
    int heap_top_pop() {
        int v = heap_[0];
        heap_pos_[v] = -1;
        int last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_[0] = last;
            heap_pos_[last] = 0;
            heap_down(0);
        }
        return v;
    }

    // Luby sequence 1,1,2,1,1,2,4,... for 0-indexed restart counts.
    static std::uint64_t luby(std::uint64_t x) {
        std::uint64_t size = 1, seq = 0;
        while (size < x + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != x) {
            size = (size - 1) / 2;
            --seq;
            x %= size;
        }
        return std::uint64_t{1} << seq;
    }

    int n_vars_ = 0;
    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<std::int8_t> value_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    std::vector<std::int8_t> phase_;
    std::vector<std::int8_t> seen_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::uint64_t conflicts_ = 0;
    std::size_t learned_count_ = 0;
    std::size_t max_learned_ = 8000;
    std::uint64_t restart_interval_ = 100;
};

inline SolveOutcome solve_internal(const CnfFormula& f, double timeout_s = 0.0) {
    CdclSolver solver(f);
    return solver.solve(timeout_s);
}

} // namespace bcsat

#include "mapcheck/containment.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "mapcheck/dummies.hpp"

namespace mapcheck {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::contained: return "contained";
        case Outcome::not_contained: return "not_contained";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "";
}

namespace {

enum class DummyState { pass, absent, left_budget };

struct DummyCheck {
    WitnessRecord record;
    DummyState state = DummyState::pass;
};

std::vector<std::uint64_t> deepening_levels(std::uint64_t bound, std::uint64_t step) {
    std::vector<std::uint64_t> levels;
    if (bound == 0) {
        levels.push_back(0);
        return levels;
    }
    for (std::uint64_t k = 1;; ++k) {
        std::uint64_t level = (bound / step >= k) ? k * step : bound;
        level = std::min(level, bound);
        levels.push_back(level);
        if (level == bound) return levels;
    }
}

DummyCheck check_dummy(const Instance& dummy, const Schema& union_schema,
                       const std::vector<Tgd>& sigma, const std::vector<Tgd>& sigma2,
                       std::uint64_t bound, std::uint64_t step, ChaseConfig left_budget,
                       std::string direction) {
    const auto started = std::chrono::steady_clock::now();
    DummyCheck out;
    out.record.direction = std::move(direction);
    out.record.instance = dummy;

    Instance lifted = dummy.with_schema(union_schema);
    left_budget.mode = ChaseMode::oblivious;
    ChaseResult left = chase(lifted, sigma, left_budget);
    out.record.left_chase_facts = left.instance.size();

    if (left.status == ChaseStatus::budget_exhausted) {
        out.state = DummyState::left_budget;
    } else {
        for (std::uint64_t level : deepening_levels(bound, step)) {
            ChaseConfig prefix_cfg;
            prefix_cfg.mode = ChaseMode::oblivious;
            prefix_cfg.max_facts = std::nullopt;
            prefix_cfg.max_level = level;
            ChaseResult right = chase(lifted, sigma2, prefix_cfg);

            out.record.level_reached = level;
            out.record.right_chase_complete = right.status == ChaseStatus::terminated;
            out.record.hom = find_homomorphism(left.instance, right.instance);
            if (out.record.hom) {
                out.state = DummyState::pass;
                break;
            }
            if (out.record.right_chase_complete || level == bound) {
                out.state = DummyState::absent;
                break;
            }
        }
    }

    out.record.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return out;
}

std::string first_fact_text(const Instance& i) {
    if (i.empty()) return "<empty>";
    return i.facts().begin()->first.to_string();
}

void require_valid_pair(const SchemaMapping& m, const SchemaMapping& m2) {
    ValidationReport left = validate_mapping(m);
    if (!left.valid()) throw error("invalid mapping (m1):\n" + left.to_string());
    ValidationReport right = validate_mapping(m2);
    if (!right.valid()) throw error("invalid mapping (m2):\n" + right.to_string());
    if (!(m.source == m2.source) || !(m.target == m2.target))
        throw error("mappings must share the source and target schemas");
}

}  // namespace

Verdict check_containment(const SchemaMapping& m, const SchemaMapping& m2,
                          const ContainmentConfig& cfg) {
    require_valid_pair(m, m2);
    if (cfg.deepening_step == 0) throw error("deepening step must be at least 1");

    const std::vector<Tgd> sigma = m.all_tgds();
    const std::vector<Tgd> sigma2 = m2.all_tgds();
    const Schema union_schema = m.union_schema();
    const std::uint64_t bound = cfg.level_bound.value_or(default_level_bound(sigma2));

    Verdict verdict;
    verdict.bound_used = bound;
    verdict.left_weakly_acyclic = is_weakly_acyclic(sigma);
    verdict.right_weakly_acyclic = is_weakly_acyclic(sigma2);

    const DummySet dummies = dummy_instances(m);
    std::vector<DummyCheck> checks(dummies.instances.size());

    auto run_one = [&](std::size_t idx) {
        checks[idx] = check_dummy(dummies.instances[idx].instance, union_schema, sigma, sigma2,
                                  bound, cfg.deepening_step, cfg.chase_budget, "m1⊆m2");
    };

    if (cfg.threads <= 1 || checks.size() <= 1) {
        for (std::size_t i = 0; i < checks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= checks.size()) return;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(cfg.threads, checks.size());
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    verdict.outcome = Outcome::contained;
    verdict.instances_checked = checks.size();
    for (const DummyCheck& check : checks) {
        verdict.witnesses.push_back(check.record);
        if (verdict.outcome != Outcome::contained) continue;
        if (check.state == DummyState::left_budget) {
            verdict.outcome = Outcome::inconclusive;
            verdict.reason = "left chase not shown finite";
        } else if (check.state == DummyState::absent) {
            verdict.outcome = Outcome::not_contained;
            verdict.reason = "no homomorphism for dummy " +
                             first_fact_text(check.record.instance);
        }
    }
    return verdict;
}

Verdict check_equivalence(const SchemaMapping& m, const SchemaMapping& m2,
                          const ContainmentConfig& cfg) {
    Verdict forward = check_containment(m, m2, cfg);
    for (WitnessRecord& w : forward.witnesses) w.direction = "m1⊆m2";

    if (forward.outcome == Outcome::not_contained) {
        forward.reason = "containment fails in direction m1⊆m2";
        return forward;
    }

    Verdict backward = check_containment(m2, m, cfg);
    for (WitnessRecord& w : backward.witnesses) w.direction = "m2⊆m1";

    Verdict verdict;
    verdict.bound_used = std::max(forward.bound_used, backward.bound_used);
    verdict.instances_checked = forward.instances_checked + backward.instances_checked;
    verdict.left_weakly_acyclic = forward.left_weakly_acyclic;
    verdict.right_weakly_acyclic = forward.right_weakly_acyclic;
    verdict.witnesses = forward.witnesses;
    verdict.witnesses.insert(verdict.witnesses.end(), backward.witnesses.begin(),
                             backward.witnesses.end());

    if (backward.outcome == Outcome::not_contained) {
        verdict.outcome = Outcome::not_contained;
        verdict.reason = "containment fails in direction m2⊆m1";
    } else if (forward.outcome == Outcome::contained &&
               backward.outcome == Outcome::contained) {
        verdict.outcome = Outcome::contained;
    } else {
        verdict.outcome = Outcome::inconclusive;
        verdict.reason = forward.outcome == Outcome::inconclusive ? forward.reason
                                                                  : backward.reason;
    }
    return verdict;
}

}  // namespace mapcheck

#include "mapcheck/dummies.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mapcheck {

std::vector<std::vector<std::size_t>> set_partitions(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> code(n, 0);

    std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t pos,
                                                               std::size_t max_used) {
        if (pos == n) {
            out.push_back(code);
            return;
        }
        for (std::size_t block = 0; block <= max_used + 1 && block <= pos; ++block) {
            code[pos] = block;
            extend(pos + 1, std::max(max_used, block));
        }
    };

    if (n == 0) {
        out.push_back({});
    } else {
        code[0] = 0;
        extend(1, 0);
    }
    // Ascending lexicographic enumeration ends with the all-distinct code;
    // emit finest first.
    std::reverse(out.begin(), out.end());
    return out;
}

DummySet dummy_instances(const SchemaMapping& m) {
    std::set<std::string> predicates;
    for (const Tgd& tgd : m.st_tgds)
        for (const Atom& a : tgd.body) predicates.insert(a.predicate);

    DummySet out;
    for (const std::string& predicate : predicates) {
        auto arity = m.source.arity_of(predicate);
        if (!arity)
            throw error("st dependency body predicate '" + predicate +
                        "' is not part of the source schema");
        for (const auto& code : set_partitions(*arity)) {
            Atom fact;
            fact.predicate = predicate;
            std::size_t blocks = 0;
            for (std::size_t pos = 0; pos < code.size(); ++pos) {
                fact.args.push_back(Term::constant("z" + std::to_string(code[pos] + 1)));
                blocks = std::max(blocks, code[pos] + 1);
            }
            DummyInstance dummy{Instance(m.source), predicate, {}};
            dummy.instance.insert(fact, 0);
            dummy.partition.resize(blocks);
            for (std::size_t pos = 0; pos < code.size(); ++pos)
                dummy.partition[code[pos]].push_back(pos);
            out.instances.push_back(std::move(dummy));
        }
    }
    return out;
}

}  // namespace mapcheck

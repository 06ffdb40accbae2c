#pragma once

#include "mapcheck/model.hpp"

namespace mapcheck {

struct DummyInstance {
    Instance instance;   // a single fact over the source schema
    std::string predicate;
    std::vector<std::vector<std::size_t>> partition;  // argument positions sharing a constant
};

struct DummySet {
    std::vector<DummyInstance> instances;
};

// All partitions of {0..n-1} as restricted-growth strings (block index per
// position, blocks numbered by first occurrence), finest partition first.
std::vector<std::vector<std::size_t>> set_partitions(std::size_t n);

// One single-fact instance per (body predicate of an st dependency, partition
// of its argument positions), with fresh constants z1, z2, ... numbered by
// first occurrence. Predicates are visited in name order. Two structurally
// equal patterns never repeat: the partitions are canonical representatives.
DummySet dummy_instances(const SchemaMapping& m);

}  // namespace mapcheck

#pragma once

#include <string>

#include "mapcheck/model.hpp"
#include "mapcheck/parse.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

inline mapcheck::SchemaMapping fixture_mapping(const std::string& name) {
    return mapcheck::parse_mapping(mapcheck::load_file(fixture_path(name)));
}

inline mapcheck::Instance fixture_instance(const std::string& name,
                                           const mapcheck::Schema& schema) {
    return mapcheck::parse_instance(mapcheck::load_file(fixture_path(name)), schema);
}

inline mapcheck::ConjunctiveQuery fixture_query(const std::string& name,
                                                const mapcheck::Schema& schema) {
    return mapcheck::parse_query(mapcheck::load_file(fixture_path(name)), schema);
}

inline mapcheck::SchemaMapping mapping_from(const std::string& text) {
    return mapcheck::parse_mapping({text, "<test>"});
}

inline mapcheck::Instance instance_from(const std::string& text,
                                        const mapcheck::Schema& schema) {
    return mapcheck::parse_instance({text, "<test>"}, schema);
}

inline mapcheck::ConjunctiveQuery query_from(const std::string& text,
                                             const mapcheck::Schema& schema) {
    return mapcheck::parse_query({text, "<test>"}, schema);
}

inline mapcheck::Term c(const std::string& name) { return mapcheck::Term::constant(name); }
inline mapcheck::Term n(std::uint64_t id) { return mapcheck::Term::null(id); }
inline mapcheck::Term v(const std::string& name) { return mapcheck::Term::variable(name); }

}  // namespace testutil

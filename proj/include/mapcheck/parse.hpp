#pragma once

#include <string>
#include <vector>

#include "mapcheck/model.hpp"

namespace mapcheck {

struct SourceText {
    std::string content;
    std::string origin = "<input>";
};

struct SourcePos {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based
};

class parse_error : public error {
public:
    parse_error(const std::string& origin, SourcePos pos, const std::string& message);
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

struct ParsedMapping {
    SchemaMapping mapping;
    std::vector<SourcePos> st_positions;  // one per st tgd, in order
    std::vector<SourcePos> t_positions;
};

// Syntax only; the result may fail validate_mapping.
ParsedMapping parse_mapping_raw(const SourceText& text);

// Parses and validates; throws parse_error carrying positions for both
// syntax and validation problems.
SchemaMapping parse_mapping(const SourceText& text);

// Facts "pred(arg,...).", arguments are constants or labelled nulls "_k".
// All facts enter at level 0; duplicates collapse silently.
Instance parse_instance(const SourceText& text, const Schema& schema);

// "q(X,Y) :- pred(X,Y), ... ." with upper-case variables and lower-case or
// numeric constants. Every head variable must occur in the body.
ConjunctiveQuery parse_query(const SourceText& text, const Schema& schema);

// Canonical form: one fact per line, "atom.\n", ordered by predicate name
// then argument order (constants before nulls, nulls by id). Levels are not
// serialized; parsing the output reproduces the same fact set at level 0.
std::string serialize_instance(const Instance& i);

SourceText load_file(const std::string& path);

}  // namespace mapcheck

#pragma once

// JSON wire format. Rationals travel as "p/q" strings; bare JSON integers are
// accepted on input. Every parse failure is a ValidationError naming the field.

#include "polyton/rational.hpp"
#include "polyton/step.hpp"

#include <json.hpp>

#include <string>

namespace polyton {

using Json = nlohmann::ordered_json;

Rational rational_from_json(const Json& j, const std::string& field);
Json to_json(const Rational& r);
Json to_json(const std::vector<Rational>& v);
Json to_json(const RationalMatrix& m);

/// {"measures": [...], "values": [[...], ...]}
StepGraphon graphon_from_json(const Json& j);
Json to_json(const StepGraphon& w);

/// {"row_measures", "col_measures", "values"}; a graphon-shaped object with a
/// single "measures" array is accepted and used for both sides.
StepKernel kernel_from_json(const Json& j);
Json to_json(const StepKernel& k);

/// {"measures": [...], "values": [...]}
StepCover cover_from_json(const Json& j);
Json to_json(const StepCover& c);

/// Reads and parses a file; ValidationError on I/O or syntax problems.
Json read_json_file(const std::string& path);

}  // namespace polyton

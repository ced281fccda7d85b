#include "polyton/json_io.hpp"

#include "polyton/errors.hpp"

#include <fstream>
#include <sstream>

namespace polyton {

namespace {

const Json& require(const Json& j, const char* key, const std::string& context)
{
    if (!j.is_object()) throw ValidationError(context + ": expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(context + ": missing field '" + key + "'");
    return *it;
}

std::vector<Rational> rational_vector(const Json& j, const std::string& field)
{
    if (!j.is_array()) throw ValidationError("field '" + field + "' must be an array");
    std::vector<Rational> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(rational_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

RationalMatrix rational_matrix(const Json& j, const std::string& field)
{
    if (!j.is_array()) throw ValidationError("field '" + field + "' must be an array of arrays");
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < j.size(); ++i)
        rows.push_back(rational_vector(j[i], field + "[" + std::to_string(i) + "]"));
    try {
        return RationalMatrix::from_rows(rows);
    } catch (const ValidationError& e) {
        throw ValidationError("field '" + field + "': " + e.what());
    }
}

Partition partition_field(const Json& j, const char* key, const std::string& context)
{
    auto measures = rational_vector(require(j, key, context), key);
    try {
        return Partition(std::move(measures));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

Rational rational_from_json(const Json& j, const std::string& field)
{
    if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError("field '" + field + "': " + e.what());
        }
    }
    throw ValidationError("field '" + field + "' must be a rational string \"p/q\" or an integer");
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const std::vector<Rational>& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

Json to_json(const RationalMatrix& m)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

StepGraphon graphon_from_json(const Json& j)
{
    auto partition = partition_field(j, "measures", "graphon");
    auto values = rational_matrix(require(j, "values", "graphon"), "values");
    try {
        return StepGraphon(std::move(partition), std::move(values));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("field 'values': ") + e.what());
    }
}

Json to_json(const StepGraphon& w)
{
    Json out;
    out["measures"] = to_json(w.partition().measures());
    out["values"] = to_json(w.values());
    return out;
}

StepKernel kernel_from_json(const Json& j)
{
    if (!j.is_object()) throw ValidationError("kernel: expected a JSON object");
    Partition rows, cols;
    if (j.contains("row_measures") || j.contains("col_measures")) {
        rows = partition_field(j, "row_measures", "kernel");
        cols = partition_field(j, "col_measures", "kernel");
    } else {
        rows = partition_field(j, "measures", "kernel");
        cols = rows;
    }
    auto values = rational_matrix(require(j, "values", "kernel"), "values");
    try {
        return StepKernel(std::move(rows), std::move(cols), std::move(values));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("field 'values': ") + e.what());
    }
}

Json to_json(const StepKernel& k)
{
    Json out;
    out["row_measures"] = to_json(k.row_partition().measures());
    out["col_measures"] = to_json(k.col_partition().measures());
    out["values"] = to_json(k.values());
    return out;
}

StepCover cover_from_json(const Json& j)
{
    auto partition = partition_field(j, "measures", "cover");
    auto values = rational_vector(require(j, "values", "cover"), "values");
    try {
        return StepCover(std::move(partition), std::move(values));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("field 'values': ") + e.what());
    }
}

Json to_json(const StepCover& c)
{
    Json out;
    out["measures"] = to_json(c.partition().measures());
    out["values"] = to_json(c.values());
    return out;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw ValidationError("malformed JSON in '" + path + "': " + e.what());
    }
}

}  // namespace polyton

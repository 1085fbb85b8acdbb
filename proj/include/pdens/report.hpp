#pragma once

#include "pdens/cone.hpp"
#include "pdens/crofton.hpp"
#include "pdens/dsl.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace pdens {

using Json = nlohmann::json;  // std::map-backed: keys come out sorted

Json to_json(const Rational& r);
Json to_json(const Point& x);
Json to_json(const DensityReport& r);
Json to_json(const ConeWithMultiplicity& c);
Json to_json(const CroftonResult& r);

struct RunOptions {
    long depth = 12;        // sc cross-check depth
    long refine_bound = 4;  // mt-check refinements
    int precision = kDefaultPrecision;
};

struct RunOutput {
    std::vector<Json> results;
    bool ok = true;  // no errors and every asserted equality held
};

/// Executes the queries in document order. Errors become
/// {query, set, error_kind, message} objects and execution continues.
RunOutput run(const Document& doc, const RunOptions& options = {});
Json run_query(Evaluator& eval, const Query& q, const RunOptions& options, bool* ok);

/// Default cross-check depth, overridden by the PDENS_DEPTH environment variable.
long default_depth();

}  // namespace pdens

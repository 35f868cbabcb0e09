#pragma once

#include <string>

#include <json.hpp>

#include "vck/learner.hpp"
#include "vck/packing.hpp"
#include "vck/regularity.hpp"
#include "vck/vc.hpp"

namespace vck {

using Json = nlohmann::json;

// Raised for malformed input files; carries a line/column diagnostic.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

Json load_json_file(const std::string& path);

// {"arity": k, "sizes": [...], "family": [[[i,j,...], ...], ...]}
SetFamily family_from_json(const Json& j);
Json family_to_json(const SetFamily& f);

// {"axes": [["1/4", ...], ...]}; entries are "p/q" strings or integers.
ProductMeasure measure_from_json(const Json& j, const ProductDomain& dom);
Json measure_to_json(const ProductMeasure& mu);

Json box_to_json(const Box& b);
Json trace_reports_to_json(const std::vector<TraceReport>& reports);

Json certificate_to_json(const PackingCertificate& c);
PackingCertificate certificate_from_json(const Json& j);

Json pac_report_to_json(const PacReport& r);

Json slicewise_report_to_json(const SlicewiseReport& r);
Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);
Json decomp_report_to_json(const DecompReport& r, DecompMode mode, const Rational& epsilon);
Json slicewise_certificate_to_json(const SlicewiseCertificate& c);

// Flat CSV projection of an array of JSON objects; nested values are dumped
// as compact JSON. The JSON report stays the source of truth.
std::string csv_from_rows(const Json& rows);

std::string rational_str(const Rational& r);

}  // namespace vck

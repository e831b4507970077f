#ifndef SUPLOC_IO_HPP_
#define SUPLOC_IO_HPP_

#include <string>

#include <json.hpp>

#include "suploc/approximation.hpp"
#include "suploc/assembly.hpp"
#include "suploc/law.hpp"
#include "suploc/oracle.hpp"
#include "suploc/simulate.hpp"

namespace suploc {

using json = nlohmann::ordered_json;

/// Embedded in every emitted document under the key "schema".
inline constexpr const char *kSchemaVersion = "suploc/1";

/// 17 significant digits.
std::string format_double(double x);

/// Rationals are strings "p/q"; anything else is a SchemaError.
Rational rational_from_json(const json &j, const char *key);

json to_json(const StepDensity &f);
json to_json(const BlockCollection &c);
json to_json(const PiecewiseLinearPath &p);
json to_json(const SupLocationLaw &law);
json to_json(const DensityReport &r);
json to_json(const FeasibilityReport &r);
json to_json(const PathAudit &a);
json to_json(const ConvergenceReport &r);
json to_json(const LawDistance &d);
/// Summary only; bins go to CSV.
json summary_json(const EmpiricalLaw &e);

/// {"T": ..., "pieces": [{"until": ..., "value": ...}, ...]}
StepDensity density_from_json(const json &j);
/// {"T": ..., "H": ..., "blocks": [{"kind": ..., "u": ..., "v": ...}, ...]}.
/// A "kind" entry, when present, must agree with the classification of (u,v).
BlockCollection blocks_from_json(const json &j);
/// {"period": ..., "knots": [["pos", "value"], ...], "mode": ...}; knots
/// given as {"pos": ..., "value": ...} objects are accepted too.
PiecewiseLinearPath path_from_json(const json &j);
SupLocationLaw law_from_json(const json &j);

/// CSV files open with a "# schema suploc/1" comment line.
/// Columns: n,H,m,d_n,sup_dist,L1_dist,max_lefts_per_component,max_rights_per_component.
std::string convergence_csv(const ConvergenceReport &r);
/// Columns: kind,lo,hi,mass,density with kind in {atom0, bin, atomT}.
std::string bins_csv(const EmpiricalLaw &e);
/// Plot-ready export of an exact or binned law.
std::string law_csv(const SupLocationLaw &law);

json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace suploc

#endif  // SUPLOC_IO_HPP_

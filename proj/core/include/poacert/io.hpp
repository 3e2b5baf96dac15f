#ifndef POACERT_IO_HPP
#define POACERT_IO_HPP

#include <string>
#include <variant>

#include "poacert/dualfit.hpp"
#include "poacert/equilibria.hpp"
#include "poacert/localsearch.hpp"
#include "poacert/model.hpp"
#include "poacert/oracle.hpp"

namespace poacert {

using AnyInstance = std::variant<CongestionInstance, AffineInstance>;

/// Parses the instance schema:
///   {"kind":"congestion","resources":["e1",...],
///    "players":[{"id","weight","strategies":[["e1",...],...],"processing":{"e1":1.0}}]}
/// Affine instances use resources [{"id","a","b"}] and per-player
/// "resource_weights" instead of "processing".
AnyInstance parse_instance(const std::string& json_text);
std::string instance_to_json(const CongestionInstance& inst);
std::string instance_to_json(const AffineInstance& inst);

/// Assignment schema: {"x": {"player": [p0, p1, ...]}} or the pure shorthand
/// {"x": {"player": strategyIndex}}.
template <typename Instance>
Assignment parse_assignment(const Instance& inst, const std::string& json_text);
std::string assignment_to_json(const CongestionInstance& inst, const Assignment& x);
std::string assignment_to_json(const AffineInstance& inst, const Assignment& x);

/// Distribution schema: {"support": [{"x": ..., "p": number}]}.
template <typename Instance>
ProfileDistribution parse_distribution(const Instance& inst, const std::string& json_text);

std::string cost_to_json(const CongestionInstance& inst, const CostBreakdown& c,
                         bool scheduling_fields);
std::string cost_to_json(const AffineInstance& inst, const CostBreakdown& c);
std::string equilibrium_report_to_json(const EquilibriumReport& rep);
std::string feasibility_report_to_json(const FeasibilityReport& rep);
std::string certificate_to_json(const LocalOptCertificate& cert);
std::string oracle_report_to_json(const CongestionInstance& inst, const OracleReport& rep);

/// Cost matrices and Grams as dense arrays with an index legend.
std::string cost_matrix_to_json(const CostMatrix& mat);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Formats a double with 12 significant digits (the CLI-wide convention).
std::string format_number(double v);

}  // namespace poacert

#endif

#pragma once

#include "ainfcalc/ainfty.hpp"
#include "ainfcalc/moduli.hpp"
#include "ainfcalc/transfer.hpp"
#include "ainfcalc/triangle.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ainf::io {

using json = nlohmann::json;

json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const json& j);

json cone_to_json(const Cone& cone);
ConePtr cone_from_json(const json& j);

json series_to_json(const PowerSeries& s, bool with_cone = true);
PowerSeries series_from_json(const json& j, ConePtr cone = nullptr, int trunc_order = -1);

json algebra_to_json(const CurvedAlgebra& a);
CurvedAlgebra algebra_from_json(const json& j);

json element_to_json(const Element& e, const std::vector<BasisGen>& basis);
Element element_from_json(const json& j, ConePtr cone, int trunc_order,
                          const std::vector<BasisGen>& basis);

json bimodule_to_json(const Bimodule& m);
/// base_dir resolves relative paths in "left"/"right" references.
Bimodule bimodule_from_json(const json& j, const std::filesystem::path& base_dir);

json geometry_to_json(const GeometrySpec& g);
GeometrySpec geometry_from_json(const json& j);

struct TransferProblem {
    CurvedAlgebra a;
    CurvedAlgebra b_alg;
    Bimodule m;
    Element m0;
    Element b;
    int order = 0;
    std::optional<Element> e_b;
};
TransferProblem transfer_problem_from_json(const json& j, const std::filesystem::path& base_dir);

json transfer_result_to_json(const TransferResult& r, const TriangleAlgebra& t);

json relation_report_to_json(const RelationReport& r, const CurvedAlgebra& a);
json exclusion_report_to_json(const ExclusionReport& r);

/// Evaluates a series expression tree over the given ring. Node forms:
/// {"op":"add"|"mul","args":[...]}, {"op":"neg","arg":...},
/// {"op":"int","value":"n"}, {"op":"monomial","class":[...],"coeff":"n"},
/// {"op":"series","terms":[...]}.
PowerSeries eval_series_expr(const json& expr, ConePtr cone, int trunc_order);

/// Plain-text table with aligned columns.
std::string format_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace ainf::io

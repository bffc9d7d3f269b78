#include "ainfcalc/io.hpp"

#include <fstream>
#include <sstream>

namespace ainf::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError("parse: " + msg); }

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            fail("bad integer literal '" + j.get<std::string>() + "'");
        }
    }
    fail("expected integer or integer string");
}

json int_to_json(const Int& v) { return v.get_str(); }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        try {
            Rat r(j.get<std::string>());
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            fail("bad rational literal '" + j.get<std::string>() + "'");
        }
    }
    fail("expected rational string");
}

LatticeVec lattice_from_json(const json& j) {
    if (!j.is_array()) fail("expected integer array");
    LatticeVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& x = j[static_cast<size_t>(i)];
        if (!x.is_number_integer()) fail("expected integer coordinates");
        v[i] = x.get<Coord>();
    }
    return v;
}

json lattice_to_json(const LatticeVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

std::vector<BasisGen> basis_from_json(const json& j) {
    if (!j.is_array() ) fail("expected basis array");
    std::vector<BasisGen> basis;
    for (const auto& g : j) {
        BasisGen gen;
        gen.name = need(g, "name").get<std::string>();
        gen.parity = need(g, "parity").get<int>();
        if (gen.parity != 0 && gen.parity != 1) fail("parity must be 0 or 1");
        basis.push_back(std::move(gen));
    }
    return basis;
}

json basis_to_json(const std::vector<BasisGen>& basis) {
    json out = json::array();
    for (const auto& g : basis) out.push_back(json{{"name", g.name}, {"parity", g.parity}});
    return out;
}

int basis_index(const std::vector<BasisGen>& basis, const std::string& name) {
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
        if (basis[static_cast<size_t>(i)].name == name) return i;
    fail("unknown basis name '" + name + "'");
}

// terms array -> series over a known ring
PowerSeries terms_from_json(const json& j, const ConePtr& cone, int trunc) {
    PowerSeries s(cone, trunc);
    if (!j.is_array()) fail("expected terms array");
    for (const auto& t : j) {
        LatticeVec alpha = lattice_from_json(need(t, "class"));
        s.add_term(alpha, int_from_json(need(t, "coeff")));
    }
    return s;
}

json terms_to_json(const PowerSeries& s) {
    json out = json::array();
    for (const auto& [alpha, c] : s.terms())
        out.push_back(json{{"class", lattice_to_json(alpha)}, {"coeff", int_to_json(c)}});
    return out;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("invalid JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvariantError("io: cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

json cone_to_json(const Cone& cone) {
    json j;
    j["p_count"] = cone.ambient_dim();
    json gens = json::array();
    for (int i = 0; i < cone.generator_count(); ++i) gens.push_back(lattice_to_json(cone.generator(i)));
    j["generators"] = gens;
    auto rats_to_json = [](const std::vector<Rat>& v) {
        json out = json::array();
        for (const auto& r : v) out.push_back(r.get_str());
        return out;
    };
    if (cone.ample_tag()) j["ample"] = rats_to_json(*cone.ample_tag());
    if (cone.anticanonical_tag()) j["anticanonical"] = rats_to_json(*cone.anticanonical_tag());
    return j;
}

ConePtr cone_from_json(const json& j) {
    int p = need(j, "p_count").get<int>();
    std::vector<LatticeVec> gens;
    for (const auto& g : need(j, "generators")) gens.push_back(lattice_from_json(g));
    std::optional<std::vector<Rat>> ample, anti;
    auto read_rats = [&](const char* key) -> std::optional<std::vector<Rat>> {
        auto it = j.find(key);
        if (it == j.end()) return std::nullopt;
        std::vector<Rat> out;
        for (const auto& r : *it) out.push_back(rat_from_json(r));
        return out;
    };
    ample = read_rats("ample");
    anti = read_rats("anticanonical");
    return std::make_shared<const Cone>(p, std::move(gens), std::move(ample), std::move(anti));
}

json series_to_json(const PowerSeries& s, bool with_cone) {
    json j;
    if (with_cone) j["cone"] = cone_to_json(*s.cone());
    j["trunc_order"] = s.trunc_order();
    j["terms"] = terms_to_json(s);
    return j;
}

PowerSeries series_from_json(const json& j, ConePtr cone, int trunc_order) {
    if (!cone) cone = cone_from_json(need(j, "cone"));
    int trunc = trunc_order > 0 ? trunc_order : need(j, "trunc_order").get<int>();
    return terms_from_json(need(j, "terms"), cone, trunc);
}

json algebra_to_json(const CurvedAlgebra& a) {
    json j;
    j["cone"] = cone_to_json(*a.cone());
    j["trunc_order"] = a.trunc_order();
    j["max_arity"] = a.max_arity();
    j["basis"] = basis_to_json(a.basis());
    json ops = json::array();
    for (int k = 0; k <= a.max_arity(); ++k) {
        for (const auto& [tuple, col] : a.ops(k)) {
            json inputs = json::array();
            for (int i : tuple) inputs.push_back(a.name(i));
            json output;
            for (const auto& [idx, s] : col) output[a.name(idx)] = terms_to_json(s);
            ops.push_back(json{{"arity", k}, {"inputs", inputs}, {"output", output}});
        }
    }
    j["ops"] = ops;
    return j;
}

CurvedAlgebra algebra_from_json(const json& j) {
    ConePtr cone = cone_from_json(need(j, "cone"));
    int trunc = need(j, "trunc_order").get<int>();
    auto basis = basis_from_json(need(j, "basis"));
    int max_arity = j.value("max_arity", 2);
    CurvedAlgebra a(cone, trunc, basis, max_arity);
    for (const auto& op : need(j, "ops")) {
        int arity = need(op, "arity").get<int>();
        Tuple inputs;
        for (const auto& nm : need(op, "inputs"))
            inputs.push_back(basis_index(basis, nm.get<std::string>()));
        for (const auto& [out_name, terms] : need(op, "output").items()) {
            a.set_op(arity, inputs, basis_index(basis, out_name),
                     terms_from_json(terms, cone, trunc));
        }
    }
    return a;
}

json element_to_json(const Element& e, const std::vector<BasisGen>& basis) {
    json j;
    j["parity"] = e.parity();
    json coeffs;
    for (int i = 0; i < e.rank(); ++i) {
        if (e.coeff(i).is_zero()) continue;
        coeffs[basis.at(static_cast<size_t>(i)).name] = terms_to_json(e.coeff(i));
    }
    j["coeffs"] = coeffs.is_null() ? json::object() : coeffs;
    return j;
}

Element element_from_json(const json& j, ConePtr cone, int trunc_order,
                          const std::vector<BasisGen>& basis) {
    int parity = need(j, "parity").get<int>();
    Element e(cone, trunc_order, static_cast<int>(basis.size()), parity);
    for (const auto& [name, terms] : need(j, "coeffs").items()) {
        int idx = basis_index(basis, name);
        if (basis[static_cast<size_t>(idx)].parity != (parity & 1))
            fail("element coefficient at '" + name + "' breaks homogeneity");
        e.set_coeff(idx, terms_from_json(terms, cone, trunc_order));
    }
    return e;
}

json bimodule_to_json(const Bimodule& m) {
    json j;
    j["left"] = algebra_to_json(m.left());
    j["right"] = algebra_to_json(m.right());
    j["basis"] = basis_to_json(m.basis());
    j["max_arity"] = m.max_arity();
    json ops = json::array();
    for (const auto& [key, col] : m.ops()) {
        const auto& [ij, tuple] = key;
        json inputs = json::array();
        for (int p = 0; p < ij.first; ++p)
            inputs.push_back(m.left().name(tuple[static_cast<size_t>(p)]));
        inputs.push_back(m.basis().at(static_cast<size_t>(tuple[static_cast<size_t>(ij.first)])).name);
        for (int p = 0; p < ij.second; ++p)
            inputs.push_back(m.right().name(tuple[static_cast<size_t>(ij.first + 1 + p)]));
        json output;
        for (const auto& [idx, s] : col)
            output[m.basis().at(static_cast<size_t>(idx)).name] = terms_to_json(s);
        ops.push_back(json{{"i", ij.first}, {"j", ij.second}, {"inputs", inputs}, {"output", output}});
    }
    j["ops"] = ops;
    return j;
}

namespace {

CurvedAlgebra algebra_from_ref(const json& j, const std::filesystem::path& base_dir) {
    if (j.is_string())
        return algebra_from_json(load_json_file(base_dir / j.get<std::string>()));
    return algebra_from_json(j);
}

}  // namespace

Bimodule bimodule_from_json(const json& j, const std::filesystem::path& base_dir) {
    CurvedAlgebra left = algebra_from_ref(need(j, "left"), base_dir);
    CurvedAlgebra right = algebra_from_ref(need(j, "right"), base_dir);
    auto basis = basis_from_json(need(j, "basis"));
    int max_arity = j.value("max_arity", std::max(left.max_arity(), right.max_arity()));
    Bimodule m(left, right, basis, max_arity);
    for (const auto& op : need(j, "ops")) {
        int i = need(op, "i").get<int>();
        int jj = need(op, "j").get<int>();
        const auto& inputs = need(op, "inputs");
        if (static_cast<int>(inputs.size()) != i + jj + 1) fail("bimodule op arity mismatch");
        Tuple tuple;
        for (int p = 0; p < i; ++p)
            tuple.push_back(m.left().index_of(inputs[static_cast<size_t>(p)].get<std::string>()));
        tuple.push_back(basis_index(basis, inputs[static_cast<size_t>(i)].get<std::string>()));
        for (int p = 0; p < jj; ++p)
            tuple.push_back(
                m.right().index_of(inputs[static_cast<size_t>(i + 1 + p)].get<std::string>()));
        for (const auto& [out_name, terms] : need(op, "output").items()) {
            m.set_op(i, jj, tuple, basis_index(basis, out_name),
                     terms_from_json(terms, m.cone(), m.trunc_order()));
        }
    }
    return m;
}

json geometry_to_json(const GeometrySpec& g) {
    json j;
    j["n"] = g.n;
    j["divisors"] = g.divisors;
    json classes = json::array();
    for (const auto& c : g.classes) {
        json e;
        e["name"] = c.name;
        e["c1"] = c.c1;
        e["intersections"] = c.intersections;
        json adm = json::array();
        for (DivisorSet K : c.admissible) {
            json names = json::array();
            for (int q = 0; q < g.q_count(); ++q)
                if (K & (1u << q)) names.push_back(g.divisors[static_cast<size_t>(q)]);
            adm.push_back(names);
        }
        e["admissible"] = adm;
        classes.push_back(e);
    }
    j["classes"] = classes;
    if (g.q0) {
        json names = json::array();
        for (int q = 0; q < g.q_count(); ++q)
            if (*g.q0 & (1u << q)) names.push_back(g.divisors[static_cast<size_t>(q)]);
        j["Q0"] = names;
    }
    if (g.divisor_weights) j["divisor_weights"] = *g.divisor_weights;
    if (g.cone) j["cone"] = cone_to_json(*g.cone);
    return j;
}

GeometrySpec geometry_from_json(const json& j) {
    GeometrySpec g;
    g.n = need(j, "n").get<int>();
    for (const auto& d : need(j, "divisors")) g.divisors.push_back(d.get<std::string>());
    auto divisor_index = [&](const std::string& name) {
        for (int q = 0; q < g.q_count(); ++q)
            if (g.divisors[static_cast<size_t>(q)] == name) return q;
        fail("unknown divisor '" + name + "'");
    };
    for (const auto& c : need(j, "classes")) {
        GeometrySpec::ClassEntry e;
        e.name = need(c, "name").get<std::string>();
        e.c1 = need(c, "c1").get<long long>();
        for (const auto& v : need(c, "intersections")) e.intersections.push_back(v.get<Coord>());
        auto it = c.find("admissible");
        if (it == c.end()) {
            e.admissible = {0};
        } else {
            for (const auto& kset : *it) {
                DivisorSet mask = 0;
                for (const auto& nm : kset) mask |= (1u << divisor_index(nm.get<std::string>()));
                e.admissible.push_back(mask);
            }
        }
        g.classes.push_back(std::move(e));
    }
    auto q0 = j.find("Q0");
    if (q0 != j.end()) {
        DivisorSet mask = 0;
        for (const auto& nm : *q0) mask |= (1u << divisor_index(nm.get<std::string>()));
        g.q0 = mask;
    }
    auto dw = j.find("divisor_weights");
    if (dw != j.end()) {
        std::vector<std::vector<Coord>> w;
        for (const auto& row : *dw) {
            std::vector<Coord> r;
            for (const auto& v : row) r.push_back(v.get<Coord>());
            w.push_back(std::move(r));
        }
        g.divisor_weights = std::move(w);
    }
    auto cone_it = j.find("cone");
    if (cone_it != j.end()) g.cone = cone_from_json(*cone_it);
    g.validate();
    return g;
}

TransferProblem transfer_problem_from_json(const json& j, const std::filesystem::path& base_dir) {
    CurvedAlgebra a = algebra_from_ref(need(j, "A"), base_dir);
    CurvedAlgebra b_alg = algebra_from_ref(need(j, "B"), base_dir);
    const json& mj = need(j, "M");
    Bimodule m = mj.is_string()
                     ? bimodule_from_json(load_json_file(base_dir / mj.get<std::string>()), base_dir)
                     : bimodule_from_json(mj, base_dir);
    Element m0 = element_from_json(need(j, "m0"), m.cone(), m.trunc_order(), m.basis());
    Element b = element_from_json(need(j, "b"), b_alg.cone(), b_alg.trunc_order(), b_alg.basis());
    TransferProblem p{std::move(a), std::move(b_alg), std::move(m), std::move(m0), std::move(b),
                      need(j, "N").get<int>(), std::nullopt};
    auto eb = j.find("e_b");
    if (eb != j.end())
        p.e_b = element_from_json(*eb, p.b_alg.cone(), p.b_alg.trunc_order(), p.b_alg.basis());
    return p;
}

json transfer_result_to_json(const TransferResult& r, const TriangleAlgebra& t) {
    json j;
    j["a"] = element_to_json(r.a, t.a_part().basis());
    j["m"] = element_to_json(r.m, t.m_part().basis());
    j["order_achieved"] = r.order_achieved;
    json log = json::array();
    for (const auto& entry : r.log) {
        log.push_back(json{{"order", entry.order},
                           {"monomials", entry.monomial_count},
                           {"solved", entry.solved},
                           {"note", entry.note}});
    }
    j["log"] = log;
    if (r.cunit_requested) {
        json c;
        c["lifted"] = r.cunit_lifted;
        c["verified"] = r.cunit_verified;
        if (r.e_a) c["e_a"] = element_to_json(*r.e_a, t.a_part().basis());
        j["cunit"] = c;
    }
    return j;
}

json relation_report_to_json(const RelationReport& r, const CurvedAlgebra& a) {
    json j;
    j["ok"] = r.ok();
    j["arity_checked"] = r.arity_checked;
    json v = json::array();
    for (const auto& viol : r.violations) {
        json inputs = json::array();
        for (int i : viol.inputs) inputs.push_back(a.name(i));
        v.push_back(json{{"arity", viol.arity}, {"inputs", inputs}, {"value", viol.detail}});
    }
    j["violations"] = v;
    return j;
}

json exclusion_report_to_json(const ExclusionReport& r) {
    json j;
    j["disc_dim"] = r.disc_dim;
    j["exclusion_holds"] = r.exclusion_holds;
    json rows = json::array();
    for (const auto& cfg : r.configs) {
        json row;
        row["dim"] = cfg.dim;
        row["survivor"] = cfg.survivor;
        row["canonical_no_bubble"] = cfg.canonical_no_bubble;
        row["bubbles"] = static_cast<int>(cfg.bubbles.size());
        json tang = json::array();
        for (const auto& trow : cfg.tangency.rows) tang.push_back(trow);
        row["tangency"] = tang;
        rows.push_back(row);
    }
    j["configs"] = rows;
    return j;
}

PowerSeries eval_series_expr(const json& expr, ConePtr cone, int trunc_order) {
    const std::string op = need(expr, "op").get<std::string>();
    if (op == "add" || op == "mul") {
        const auto& args = need(expr, "args");
        if (args.empty()) fail("empty argument list");
        PowerSeries acc = eval_series_expr(args[0], cone, trunc_order);
        for (size_t i = 1; i < args.size(); ++i) {
            PowerSeries next = eval_series_expr(args[i], cone, trunc_order);
            acc = (op == "add") ? acc + next : acc * next;
        }
        return acc;
    }
    if (op == "neg") return -eval_series_expr(need(expr, "arg"), cone, trunc_order);
    if (op == "int")
        return PowerSeries::constant(cone, trunc_order, int_from_json(need(expr, "value")));
    if (op == "monomial") {
        Int c = expr.contains("coeff") ? int_from_json(expr["coeff"]) : Int(1);
        return PowerSeries::monomial(cone, trunc_order, lattice_from_json(need(expr, "class")), c);
    }
    if (op == "series") return terms_from_json(need(expr, "terms"), cone, trunc_order);
    fail("unknown series op '" + op + "'");
}

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return "";
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << row[c];
            if (c + 1 < row.size())
                os << std::string(width[c] - row[c].size() + 2, ' ');
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace ainf::io

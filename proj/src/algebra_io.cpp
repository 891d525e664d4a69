#include "liewn/algebra_io.hpp"

#include <fstream>

#include "liewn/parse.hpp"
#include "liewn/render.hpp"

namespace liewn::io {

namespace {

using nlohmann::json;
using sym::Expr;
using sym::SymbolKind;

const json& require(const json& doc, const std::string& key, const std::string& at) {
    if (!doc.contains(key)) throw SchemaError(at + "/" + key, "missing required member");
    return doc.at(key);
}

std::size_t index_at(const json& v, const std::string& at, std::size_t order) {
    if (!v.is_number_integer()) throw SchemaError(at, "expected an integer index");
    const auto x = v.get<std::int64_t>();
    if (x < 1 || static_cast<std::size_t>(x) > order) {
        throw SchemaError(at, "index out of range 1.." + std::to_string(order));
    }
    return static_cast<std::size_t>(x);
}

Expr expr_at(const json& v, const std::string& at, const sym::ParseOptions& opts) {
    if (v.is_number_integer()) return Expr(sym::Coefficient(v.get<std::int64_t>()));
    if (!v.is_string()) throw SchemaError(at, "expected a coefficient string");
    try {
        return sym::parse_expr(v.get<std::string>(), opts);
    } catch (const ParseError& e) {
        throw SchemaError(at, e.what());
    }
}

SymbolKind coefficient_kind(const json& doc) {
    if (!doc.contains("coefficient_symbol")) return SymbolKind::Lambda;
    const json& v = doc.at("coefficient_symbol");
    if (v == "Lambda") return SymbolKind::Lambda;
    if (v == "Theta") return SymbolKind::Theta;
    throw SchemaError("/coefficient_symbol", "expected \"Lambda\" or \"Theta\"");
}

}  // namespace

lie::Algebra algebra_from_json(const json& doc, bool check) {
    if (!doc.is_object()) throw SchemaError("", "expected an object");
    const bool has_structure = doc.contains("structure");
    const bool has_generators = doc.contains("generators");
    if (has_structure == has_generators) {
        throw SchemaError("", "exactly one of \"structure\" and \"generators\" must be present");
    }
    std::string name;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw SchemaError("/name", "expected a string");
        name = doc.at("name").get<std::string>();
    }
    lie::Algebra a;
    if (has_structure) {
        const json& ord = require(doc, "order", "");
        if (!ord.is_number_integer() || ord.get<std::int64_t>() < 1) {
            throw SchemaError("/order", "expected a positive integer");
        }
        const auto order = ord.get<std::size_t>();
        std::vector<std::string> params;
        if (doc.contains("parameters")) {
            const json& ps = doc.at("parameters");
            if (!ps.is_array()) throw SchemaError("/parameters", "expected an array of names");
            for (std::size_t k = 0; k < ps.size(); ++k) {
                if (!ps[k].is_string()) throw SchemaError("/parameters/" + std::to_string(k), "expected a string");
                params.push_back(ps[k].get<std::string>());
            }
        }
        const sym::ParseOptions opts{.parameters = params, .allow_new_parameters = false};
        const json& st = doc.at("structure");
        if (!st.is_array()) throw SchemaError("/structure", "expected an array of [i, j, l, coeff]");
        std::vector<lie::StructureEntry> entries;
        for (std::size_t k = 0; k < st.size(); ++k) {
            const std::string at = "/structure/" + std::to_string(k);
            const json& row = st[k];
            if (!row.is_array() || row.size() != 4) throw SchemaError(at, "expected [i, j, l, coeff]");
            lie::StructureEntry e{index_at(row[0], at + "/0", order), index_at(row[1], at + "/1", order),
                                  index_at(row[2], at + "/2", order), expr_at(row[3], at + "/3", opts)};
            if (e.i >= e.j) throw SchemaError(at, "entries must satisfy i < j");
            entries.push_back(std::move(e));
        }
        try {
            a = lie::from_structure_constants(order, entries, params, name);
        } catch (const AlgebraError& e) {
            throw SchemaError("/structure", e.what());
        }
    } else {
        const json& dim = require(doc, "dimension", "");
        if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1) {
            throw SchemaError("/dimension", "expected a positive integer");
        }
        const auto n = dim.get<std::size_t>();
        const json& gs = doc.at("generators");
        if (!gs.is_array() || gs.empty()) throw SchemaError("/generators", "expected a non-empty array of matrices");
        const sym::ParseOptions opts{.parameters = std::vector<std::string>{}, .allow_new_parameters = false};
        std::vector<CMatrix> mats;
        for (std::size_t g = 0; g < gs.size(); ++g) {
            const std::string at = "/generators/" + std::to_string(g);
            if (!gs[g].is_array() || gs[g].size() != n) throw SchemaError(at, "expected " + std::to_string(n) + " rows");
            CMatrix m(n, n);
            for (std::size_t r = 0; r < n; ++r) {
                const json& row = gs[g][r];
                const std::string rat = at + "/" + std::to_string(r);
                if (!row.is_array() || row.size() != n) {
                    throw SchemaError(rat, "expected " + std::to_string(n) + " entries");
                }
                for (std::size_t c = 0; c < n; ++c) {
                    const Expr e = expr_at(row[c], rat + "/" + std::to_string(c), opts);
                    if (!e.is_constant()) throw SchemaError(rat + "/" + std::to_string(c), "expected a constant");
                    m.at(r, c) = e.constant_value();
                }
            }
            mats.push_back(std::move(m));
        }
        try {
            a = lie::from_matrix_generators(mats, name);
        } catch (const AlgebraError& e) {
            throw SchemaError("/generators", e.what());
        }
    }
    a.coefficient_kind = coefficient_kind(doc);
    if (check) {
        const lie::ValidationReport rep = lie::validate(a);
        if (!rep.empty()) throw AlgebraError("algebra '" + a.name + "' failed validation:\n" + rep.summary());
    }
    return a;
}

json algebra_to_json(const lie::Algebra& a) {
    json doc;
    doc["name"] = a.name;
    if (a.coefficient_kind == SymbolKind::Theta) doc["coefficient_symbol"] = "Theta";
    if (a.has_generators()) {
        const std::size_t n = a.generators.front().rows();
        doc["dimension"] = n;
        json gs = json::array();
        for (const auto& m : a.generators) {
            json rows = json::array();
            for (std::size_t r = 0; r < n; ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < n; ++c) row.push_back(sym::text(Expr(m.at(r, c))));
                rows.push_back(std::move(row));
            }
            gs.push_back(std::move(rows));
        }
        doc["generators"] = std::move(gs);
        return doc;
    }
    const std::size_t L = a.order();
    doc["order"] = L;
    doc["parameters"] = a.parameters;
    json st = json::array();
    for (std::size_t i = 1; i <= L; ++i) {
        for (std::size_t j = i + 1; j <= L; ++j) {
            for (std::size_t l = 1; l <= L; ++l) {
                const Expr& g = a.gamma(i, j, l);
                if (!g.is_zero()) st.push_back(json::array({i, j, l, sym::text(g)}));
            }
        }
    }
    doc["structure"] = std::move(st);
    return doc;
}

lie::Algebra load_algebra(const std::filesystem::path& path, bool check) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open algebra file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    lie::Algebra a = algebra_from_json(doc, check);
    if (a.name.empty()) a.name = path.stem().string();
    return a;
}

void save_algebra(const lie::Algebra& a, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    // one structure row or matrix row per line
    const json doc = algebra_to_json(a);
    const char* list = doc.contains("structure") ? "structure" : "generators";
    out << "{\n";
    bool first = true;
    for (const auto& [key, value] : doc.items()) {
        if (!first) out << ",\n";
        first = false;
        out << "  " << json(key).dump() << ": ";
        if (key != list) {
            out << value.dump();
            continue;
        }
        out << "[";
        for (std::size_t k = 0; k < value.size(); ++k) {
            out << (k ? ",\n    " : "\n    ");
            if (key == "structure") {
                out << value[k].dump();
                continue;
            }
            out << "[";
            for (std::size_t r = 0; r < value[k].size(); ++r) out << (r ? ", " : "") << value[k][r].dump();
            out << "]";
        }
        out << "\n  ]";
    }
    out << "\n}\n";
}

}  // namespace liewn::io

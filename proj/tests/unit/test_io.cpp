#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "liewn/algebra_io.hpp"
#include "liewn/catalog.hpp"

using namespace liewn;
using nlohmann::json;

namespace {

const std::filesystem::path kData = LIEWN_DATA_DIR;

std::string schema_pointer(const json& doc) {
    try {
        io::algebra_from_json(doc);
    } catch (const io::SchemaError& e) {
        return e.pointer;
    }
    return "<no error>";
}

std::string schema_message(const json& doc) {
    try {
        io::algebra_from_json(doc);
    } catch (const io::SchemaError& e) {
        return e.what();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("shipped files match the built-in catalog") {
    for (const auto& e : catalog::shipped()) {
        CAPTURE(e.stem);
        const lie::Algebra file = io::load_algebra(kData / (e.stem + ".json"));
        const lie::Algebra built = e.make();
        CHECK(file.gamma == built.gamma);
        CHECK(file.generators == built.generators);
        CHECK(file.coefficient_kind == built.coefficient_kind);
    }
    CHECK(io::load_algebra(kData / "su2_cwb.json").order() == 3);
    CHECK(io::load_algebra(kData / "coupled_oscillators.json").order() == 11);
}

TEST_CASE("round trip through JSON and files") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "liewn_io_test";
    std::filesystem::create_directories(dir);
    for (const auto& e : catalog::shipped()) {
        CAPTURE(e.stem);
        const lie::Algebra a = e.make();
        const lie::Algebra b = io::algebra_from_json(io::algebra_to_json(a));
        CHECK(b.gamma == a.gamma);
        CHECK(b.generators == a.generators);
        CHECK(b.parameters == a.parameters);

        const std::filesystem::path p = dir / (e.stem + ".json");
        io::save_algebra(a, p);
        const lie::Algebra c = io::load_algebra(p);
        CHECK(c.gamma == a.gamma);
        CHECK(c.name == a.name);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("schema errors carry JSON pointers") {
    const json base = {{"order", 3}, {"structure", json::array({json::array({1, 2, 3, "1"})})}};
    CHECK(schema_pointer(base) == "<no error>");

    json zero = base;
    zero["structure"][0][0] = 0;
    CHECK(schema_pointer(zero) == "/structure/0/0");
    CHECK(schema_message(zero).find("index out of range 1..3") != std::string::npos);

    json high = base;
    high["structure"][0][2] = 4;
    CHECK(schema_pointer(high) == "/structure/0/2");

    json lower = base;
    lower["structure"][0] = json::array({2, 1, 3, "1"});
    CHECK(schema_pointer(lower) == "/structure/0");

    json short_row = base;
    short_row["structure"][0] = json::array({1, 2, 3});
    CHECK(schema_pointer(short_row) == "/structure/0");

    json bad_coeff = base;
    bad_coeff["structure"][0][3] = "1 +";
    CHECK(schema_pointer(bad_coeff) == "/structure/0/3");

    json not_int = base;
    not_int["structure"][0][1] = "2";
    CHECK(schema_pointer(not_int) == "/structure/0/1");

    CHECK(schema_pointer(json::array()) == "");
    CHECK(schema_pointer(json::object()) == "");
    CHECK(schema_pointer({{"order", 0}, {"structure", json::array()}}) == "/order");
    CHECK(schema_pointer({{"order", 2}, {"structure", json::array()}, {"name", 3}}) == "/name");
    CHECK(schema_pointer({{"order", 2}, {"structure", json::array()}, {"coefficient_symbol", "X"}}) == "/coefficient_symbol");

    const json gens = {{"dimension", 2},
                       {"generators", json::array({json::array({json::array({"0", "1"}), json::array({"0"})})})}};
    CHECK(schema_pointer(gens) == "/generators/0/1");
    const json sym_entry = {{"dimension", 1}, {"generators", json::array({json::array({json::array({"L1"})})})}};
    CHECK(schema_pointer(sym_entry) == "/generators/0/0/0");
}

TEST_CASE("validation failures and file errors") {
    // [g1,g2] = g3, [g2,g3] = g1, [g1,g3] = -g1 violates the Jacobi identity
    const json bad = {{"order", 3},
                      {"structure", json::array({json::array({1, 2, 3, "1"}), json::array({2, 3, 1, "1"}),
                                                 json::array({1, 3, 1, "-1"})})}};
    CHECK_THROWS_AS(io::algebra_from_json(bad), AlgebraError);
    CHECK_NOTHROW(io::algebra_from_json(bad, false));

    CHECK_THROWS_AS(io::load_algebra(kData / "missing.json"), Error);

    const std::filesystem::path p = std::filesystem::temp_directory_path() / "liewn_io_invalid.json";
    std::ofstream(p) << "{ \"order\": ";
    CHECK_THROWS_AS(io::load_algebra(p), io::SchemaError);
    std::filesystem::remove(p);
}

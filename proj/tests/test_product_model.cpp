#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fuzzyplan/errors.hpp"
#include "fuzzyplan/product_model.hpp"
#include "support.hpp"

using namespace fuzzyplan;
using fuzzyplan::test::ModelBuilder;
using fuzzyplan::test::fixture;

namespace {

nlohmann::json tiny_doc()
{
    return nlohmann::json::parse(R"({
      "name": "tiny",
      "grippers": ["G1", "G2"],
      "directions": ["+z", "-z"],
      "components": [
        {"id": 0, "name": "base", "grippers": ["G1"]},
        {"id": 1, "name": "lid", "grippers": ["G1", "G2"]}
      ],
      "interference": {"+z": [[0,1],[0,0]], "-z": [[0,0],[1,0]]},
      "contact": {"+z": [[0,1],[0,0]], "-z": [[0,0],[1,0]]},
      "connection": {"+z": [[0,0],[0,0]], "-z": [[0,0],[0,0]]}
    })");
}

std::string validation_message(const nlohmann::json& doc)
{
    try {
        product_from_json(doc);
    } catch (const ValidationError& e) {
        return e.what();
    } catch (const ParseError& e) {
        return std::string("parse: ") + e.what();
    }
    return "";
}

} // namespace

TEST_CASE("tiny product loads")
{
    const auto m = product_from_json(tiny_doc());
    CHECK(m.size() == 2);
    CHECK(m.direction_count() == 2);
    CHECK(m.gripper_catalog().size() == 2);
    CHECK(m.interference(0)(0, 1));
    CHECK_FALSE(m.interference(0)(1, 0));
    REQUIRE(m.directions()[0].opposite);
    CHECK(*m.directions()[0].opposite == 1);
    CHECK(m.allowed_grippers(1).size() == 2);
}

TEST_CASE("removable follows blockers")
{
    const auto m = product_from_json(tiny_doc());
    RemovedSet none(2);
    CHECK_FALSE(removable(m, 0, 0, none)); // lid on top
    CHECK(removable(m, 1, 0, none));
    CHECK(removable(m, 0, 1, none));
    RemovedSet lidOut(2);
    lidOut.insert(1);
    CHECK(removable(m, 0, 0, lidOut));
}

TEST_CASE("removable is monotone in the removed set")
{
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = fuzzyplan::test::random_model(9, 3, 2, 0.3, rng);
        RemovedSet removed(9);
        for (int step = 0; step < 9; ++step) {
            std::vector<std::pair<PartId, DirIndex>> ok;
            for (PartId p = 0; p < 9; ++p) {
                for (DirIndex d = 0; d < 3; ++d) {
                    if (removable(m, p, d, removed)) {
                        ok.push_back({p, d});
                    }
                }
            }
            removed.insert(static_cast<PartId>(rng.index(9)));
            for (auto [p, d] : ok) {
                CHECK(removable(m, p, d, removed));
            }
        }
    }
}

TEST_CASE("reduce agrees with removing from the set")
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = fuzzyplan::test::random_model(5, 2, 2, 0.35, rng);
        const auto out = static_cast<PartId>(rng.index(5));
        const auto r = reduce(m, out);
        REQUIRE(r.size() == 4);
        RemovedSet removed(5);
        removed.insert(out);
        for (PartId p = 0; p < 5; ++p) {
            if (p == out) {
                continue;
            }
            const PartId q = p < out ? p : p - 1;
            CHECK(r.components()[q] == m.components()[p]);
            for (DirIndex d = 0; d < 2; ++d) {
                CHECK(removable(r, q, d, RemovedSet(4)) == removable(m, p, d, removed));
            }
        }
    }
}

TEST_CASE("reduce rejects bad ids")
{
    const auto m = product_from_json(tiny_doc());
    CHECK_THROWS_AS(reduce(m, 2), ValidationError);
    CHECK_THROWS_AS(reduce(m, -1), ValidationError);
}

TEST_CASE("json round trip")
{
    const auto m = product_from_json(tiny_doc());
    const auto text = serialize_product(m);
    std::istringstream in(text);
    const auto back = load_product(in);
    CHECK(back == m);
    CHECK(serialize_product(back) == text);

    const auto p2 = load_product_file(fixture("product2.json"));
    std::istringstream in2(serialize_product(p2));
    CHECK(load_product(in2) == p2);
}

TEST_CASE("validation names the offending field")
{
    SUBCASE("diagonal")
    {
        auto doc = tiny_doc();
        doc["interference"]["+z"][0][0] = 1;
        const auto msg = validation_message(doc);
        CHECK(msg.find("interference[+z]") != std::string::npos);
        CHECK(msg.find("diagonal") != std::string::npos);
    }
    SUBCASE("shape")
    {
        auto doc = tiny_doc();
        doc["contact"]["-z"] = nlohmann::json::parse("[[0,0,0],[0,0,0]]");
        CHECK(validation_message(doc).find("contact[-z]") != std::string::npos);
    }
    SUBCASE("missing direction matrix")
    {
        auto doc = tiny_doc();
        doc["connection"].erase("-z");
        CHECK(validation_message(doc).find("connection[-z]") != std::string::npos);
    }
    SUBCASE("unknown gripper")
    {
        auto doc = tiny_doc();
        doc["components"][1]["grippers"] = {"G9"};
        CHECK(validation_message(doc).find("components[1].grippers") != std::string::npos);
    }
    SUBCASE("empty gripper set")
    {
        auto doc = tiny_doc();
        doc["components"][0]["grippers"] = nlohmann::json::array();
        CHECK(validation_message(doc).find("grippers") != std::string::npos);
    }
    SUBCASE("no directions")
    {
        auto doc = tiny_doc();
        doc["directions"] = nlohmann::json::array();
        CHECK_FALSE(validation_message(doc).empty());
    }
    SUBCASE("ids out of order")
    {
        auto doc = tiny_doc();
        doc["components"][0]["id"] = 1;
        CHECK(validation_message(doc).find(".id") != std::string::npos);
    }
    SUBCASE("non-boolean entry")
    {
        auto doc = tiny_doc();
        doc["interference"]["+z"][0][1] = "yes";
        CHECK(validation_message(doc).rfind("parse: ", 0) == 0);
    }
}

TEST_CASE("malformed text and missing files")
{
    std::istringstream bad("{ \"name\": ");
    CHECK_THROWS_AS(load_product(bad), ParseError);
    CHECK_THROWS_AS(load_product_file(fixture("does_not_exist.json")), IoError);
}

TEST_CASE("fixtures load")
{
    for (const char* name : {"product1.json", "product2.json", "single.json", "free3.json", "chain3.json",
                             "seven.json", "o01_stack3.json", "o05_box6.json", "o10_cross5.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_product_file(fixture(name)));
    }
    const auto p2 = load_product_file(fixture("product2.json"));
    CHECK(p2.size() == 19);
    REQUIRE(p2.reference_optimum());
    CHECK(p2.reference_optimum()->fitness == 68.0);
    // part 3 (id 2) can only be held by G6
    REQUIRE(p2.allowed_grippers(2).size() == 1);
    CHECK(p2.gripper_catalog()[p2.allowed_grippers(2)[0]] == "G6");
}

TEST_CASE("blocker words match the matrix")
{
    Rng rng(3);
    const auto m = fuzzyplan::test::random_model(70, 2, 1, 0.1, rng);
    for (PartId p = 0; p < 70; ++p) {
        for (DirIndex d = 0; d < 2; ++d) {
            const auto words = m.blockers(p, d);
            for (std::size_t j = 0; j < 70; ++j) {
                CHECK(((words[j / 64] >> (j % 64)) & 1U) == (m.interference(d)(p, j) ? 1U : 0U));
            }
        }
    }
}

TEST_CASE("canonical directions pair up")
{
    const auto dirs = canonical_directions();
    REQUIRE(dirs.size() == 6);
    for (std::size_t d = 0; d < 6; ++d) {
        REQUIRE(dirs[d].opposite);
        CHECK(*dirs[*dirs[d].opposite].opposite == d);
    }
}

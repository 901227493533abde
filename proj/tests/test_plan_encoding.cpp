#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "fuzzyplan/plan_encoding.hpp"
#include "support.hpp"

using namespace fuzzyplan;
using fuzzyplan::test::ModelBuilder;
using fuzzyplan::test::fixture;

namespace {

PlanChromosome plan(std::vector<PartId> seq, std::vector<DirIndex> dirs, std::vector<GripperIndex> grips)
{
    return {std::move(seq), std::move(dirs), std::move(grips)};
}

// l by peeling parts off with reduce(), independent of RemovedSet.
std::size_t feasible_by_reduction(const ProductModel& model, const PlanChromosome& c)
{
    ProductModel current = model;
    std::vector<PartId> label(model.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
        label[i] = static_cast<PartId>(i);
    }
    std::size_t l = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto pos = std::find(label.begin(), label.end(), c.sequence[k]) - label.begin();
        if (!removable(current, static_cast<PartId>(pos), c.dirs[k], RemovedSet(current.size()))) {
            break;
        }
        ++l;
        if (current.size() == 1) {
            break;
        }
        current = reduce(current, static_cast<PartId>(pos));
        label.erase(label.begin() + pos);
    }
    return l;
}

} // namespace

TEST_CASE("single component")
{
    const auto m = ModelBuilder(1).build();
    Rng rng(1);
    const auto c = random_chromosome(m, rng);
    CHECK(c.sequence == std::vector<PartId>{0});
    CHECK(check_chromosome(m, c).empty());
    CHECK(metrics(m, c) == PlanMetrics{1, 0, 0, 1});
    for (int i = 0; i < 20; ++i) {
        CHECK(mutate(c, m, rng).sequence == c.sequence);
    }
}

TEST_CASE("free stacking counts changes")
{
    ModelBuilder b(3, {"+y", "-y", "-x"});
    b.catalog = {"G1", "G2"};
    b.grips = {{0, 1}, {0, 1}, {0, 1}};
    const auto m = b.build();
    // dirs +y,+y,-x ; grips G1,G2,G2
    CHECK(metrics(m, plan({0, 1, 2}, {0, 0, 2}, {0, 1, 1})) == PlanMetrics{3, 1, 1, 3});
}

TEST_CASE("blocked first step gives zero length")
{
    ModelBuilder b(3);
    for (std::size_t d = 0; d < 2; ++d) {
        b.block(d, 2, 0);
    }
    const auto m = b.build();
    CHECK(metrics(m, plan({2, 0, 1}, {0, 1, 0}, {0, 0, 0})) == PlanMetrics{0, 0, 0, 3});
    CHECK(metrics(m, plan({0, 2, 1}, {0, 1, 0}, {0, 0, 0})).feasible == 3);
}

TEST_CASE("changes beyond the feasible prefix are ignored")
{
    ModelBuilder b(4);
    b.catalog = {"G1", "G2"};
    b.grips.assign(4, {0, 1});
    b.block(0, 2, 3).block(1, 2, 3); // 2 needs 3 out first
    const auto m = b.build();
    const auto mm = metrics(m, plan({0, 1, 2, 3}, {0, 0, 1, 0}, {0, 0, 1, 0}));
    CHECK(mm == PlanMetrics{2, 0, 0, 4});
}

TEST_CASE("order crossover by hand")
{
    ModelBuilder b(4);
    b.catalog = {"G1", "G2"};
    b.grips.assign(4, {0, 1});
    const auto m = b.build();
    const auto a = plan({0, 1, 2, 3}, {0, 0, 0, 0}, {0, 0, 0, 0});
    const auto p = plan({3, 2, 1, 0}, {1, 1, 1, 1}, {1, 1, 1, 1});
    // Segment [1,3) of `a` is kept in place; `p` fills from slot 3 on,
    // reading p from slot 3 and wrapping: 0, 3, (2), (1).
    const auto [c1, c2] = order_crossover(a, p, 1, 3);
    CHECK(c1.sequence == std::vector<PartId>{3, 1, 2, 0});
    CHECK(c1.dirs == std::vector<DirIndex>{1, 0, 0, 1});
    CHECK(c1.grips == std::vector<GripperIndex>{1, 0, 0, 1});
    CHECK(c2.sequence == std::vector<PartId>{0, 2, 1, 3});
    CHECK(c2.dirs == std::vector<DirIndex>{0, 1, 1, 0});
    CHECK(check_chromosome(m, c1).empty());
    CHECK(check_chromosome(m, c2).empty());
}

TEST_CASE("crossover of identical parents")
{
    const auto m = load_product_file(fixture("product1.json"));
    Rng rng(5);
    const auto a = random_chromosome(m, rng);
    for (int i = 0; i < 50; ++i) {
        const auto [c1, c2] = crossover(a, a, rng);
        CHECK(c1 == a);
        CHECK(c2 == a);
    }
}

TEST_CASE("operators keep every invariant")
{
    const auto m = load_product_file(fixture("product2.json"));
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_chromosome(m, rng);
        const auto b = random_chromosome(m, rng);
        REQUIRE(check_chromosome(m, a).empty());
        const auto [c1, c2] = crossover(a, b, rng);
        CHECK(check_chromosome(m, c1).empty());
        CHECK(check_chromosome(m, c2).empty());
        // genes travel with their component
        for (std::size_t k = 0; k < c1.size(); ++k) {
            const auto part = c1.sequence[k];
            const auto ia = std::find(a.sequence.begin(), a.sequence.end(), part) - a.sequence.begin();
            const auto ib = std::find(b.sequence.begin(), b.sequence.end(), part) - b.sequence.begin();
            const bool fromA = c1.dirs[k] == a.dirs[ia] && c1.grips[k] == a.grips[ia];
            const bool fromB = c1.dirs[k] == b.dirs[ib] && c1.grips[k] == b.grips[ib];
            CHECK((fromA || fromB));
        }
        const auto mu = mutate(a, m, rng);
        CHECK(check_chromosome(m, mu).empty());
        std::size_t seqDiff = 0;
        std::size_t dirDiff = 0;
        std::size_t gripDiff = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            seqDiff += mu.sequence[k] != a.sequence[k];
        }
        CHECK((seqDiff == 0 || seqDiff == 2));
        // after undoing the swap, at most one dir and one grip gene changed
        auto undone = mu;
        if (seqDiff == 2) {
            std::vector<std::size_t> at;
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (mu.sequence[k] != a.sequence[k]) {
                    at.push_back(k);
                }
            }
            std::swap(undone.sequence[at[0]], undone.sequence[at[1]]);
            std::swap(undone.dirs[at[0]], undone.dirs[at[1]]);
            std::swap(undone.grips[at[0]], undone.grips[at[1]]);
        }
        CHECK(undone.sequence == a.sequence);
        for (std::size_t k = 0; k < a.size(); ++k) {
            dirDiff += undone.dirs[k] != a.dirs[k];
            gripDiff += undone.grips[k] != a.grips[k];
        }
        CHECK(dirDiff <= 1);
        CHECK(gripDiff <= 1);
    }
}

TEST_CASE("single-gripper parts keep their gripper")
{
    const auto m = load_product_file(fixture("product1.json"));
    const auto g3 = *m.gripper_index("G3");
    Rng rng(9);
    auto c = random_chromosome(m, rng);
    for (int i = 0; i < 1000; ++i) {
        c = mutate(c, m, rng);
        const auto k = std::find(c.sequence.begin(), c.sequence.end(), 3) - c.sequence.begin();
        CHECK(c.grips[k] == g3); // part 4 of the first case study
    }
}

TEST_CASE("random chromosomes are reproducible and cover the options")
{
    const auto m = load_product_file(fixture("product2.json"));
    Rng r1(77);
    Rng r2(77);
    CHECK(random_chromosome(m, r1) == random_chromosome(m, r2));
    std::set<DirIndex> dirs;
    for (int i = 0; i < 50; ++i) {
        const auto c = random_chromosome(m, r1);
        dirs.insert(c.dirs.begin(), c.dirs.end());
    }
    CHECK(dirs.size() == m.direction_count());
}

TEST_CASE("feasible length agrees with reduction")
{
    Rng rng(2024);
    for (const char* name : {"product1.json", "product2.json", "o05_box6.json", "o07_lshape6.json"}) {
        const auto m = load_product_file(fixture(name));
        for (int i = 0; i < 200; ++i) {
            const auto c = random_chromosome(m, rng);
            CHECK(metrics(m, c).feasible == feasible_by_reduction(m, c));
        }
    }
    for (int i = 0; i < 200; ++i) {
        const auto m = fuzzyplan::test::random_model(6, 2, 2, 0.2, rng);
        const auto c = random_chromosome(m, rng);
        CHECK(metrics(m, c).feasible == feasible_by_reduction(m, c));
    }
}

TEST_CASE("plan report")
{
    const auto m = load_product_file(fixture("product1.json"));
    Rng rng(1);
    const auto c = random_chromosome(m, rng);
    const auto j = plan_to_json(m, c, metrics(m, c));
    REQUIRE(j["disassembly"].size() == 8);
    REQUIRE(j["assembly"].size() == 8);
    const auto order = assembly_order(c);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(j["assembly"][k]["part"] == order[k]);
        const auto& step = j["disassembly"][7 - k];
        const auto d = *m.direction_index(step["direction"].get<std::string>());
        CHECK(j["assembly"][k]["direction"] == m.directions()[*m.directions()[d].opposite].label);
    }
}

namespace {

// Smallest number of catalog grippers that can hold every part.
std::size_t min_gripper_cover(const ProductModel& m)
{
    const std::size_t k = m.gripper_catalog().size();
    std::size_t best = k;
    for (std::uint32_t set = 0; set < (1U << k); ++set) {
        bool covers = true;
        for (PartId p = 0; p < static_cast<PartId>(m.size()) && covers; ++p) {
            bool held = false;
            for (auto g : m.allowed_grippers(p)) {
                held = held || (set >> g & 1U);
            }
            covers = held;
        }
        if (covers) {
            best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(set)));
        }
    }
    return best;
}

PlanChromosome top_down(const ProductModel& m, const std::vector<int>& partsOneBased,
                        const std::vector<const char*>& grippers)
{
    PlanChromosome c;
    const auto up = *m.direction_index("+z");
    for (std::size_t k = 0; k < partsOneBased.size(); ++k) {
        c.sequence.push_back(partsOneBased[k] - 1);
        c.dirs.push_back(up);
        c.grips.push_back(*m.gripper_index(grippers[k]));
    }
    return c;
}

} // namespace

TEST_CASE("case-study reference optima are attained and cannot be beaten")
{
    {
        const auto m = load_product_file(fixture("product2.json"));
        // every part in one direction; each gripper switch costs one
        CHECK(min_gripper_cover(m) == 7);
        const auto c = top_down(m, {19, 15, 16, 3, 10, 18, 2, 9, 12, 13, 5, 8, 14, 17, 1, 4, 7, 11, 6},
                                {"G8", "G7", "G7", "G6", "G5", "G5", "G3", "G3", "G3", "G3", "G3", "G3", "G3", "G2",
                                 "G2", "G2", "G2", "G2", "G1"});
        REQUIRE(check_chromosome(m, c).empty());
        CHECK(metrics(m, c) == PlanMetrics{19, 0, 6, 19});
        // l <= 19, o >= 0, g >= cover - 1 gives the same bound
        CHECK(2 * 19 + 18 + (18 - (min_gripper_cover(m) - 1)) == m.reference_optimum()->fitness);
    }
    {
        const auto m = load_product_file(fixture("product1.json"));
        CHECK(min_gripper_cover(m) == 2);
        const auto c = top_down(m, {4, 8, 3, 7, 2, 5, 6, 1}, {"G3", "G3", "G3", "G1", "G1", "G1", "G1", "G1"});
        CHECK(metrics(m, c) == PlanMetrics{8, 0, 1, 8});
        CHECK(2 * 8 + 7 + 6 == m.reference_optimum()->fitness);
    }
}

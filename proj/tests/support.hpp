#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fuzzyplan/product_model.hpp"
#include "fuzzyplan/random.hpp"

namespace fuzzyplan::test {

inline std::filesystem::path fixture(const std::string& name)
{
    return std::filesystem::path(FUZZYPLAN_FIXTURE_DIR) / name;
}

// Directions "+y", "-y" by default; every matrix empty.
struct ModelBuilder {
    std::size_t n;
    std::vector<Direction> dirs;
    std::vector<std::string> catalog{"G1"};
    std::vector<std::vector<GripperIndex>> grips;
    std::vector<BoolMatrix> interference;

    explicit ModelBuilder(std::size_t parts, std::vector<std::string> labels = {"+y", "-y"}) : n(parts)
    {
        for (auto& l : labels) {
            dirs.push_back({l, std::nullopt});
        }
        grips.assign(n, {0});
        interference.assign(dirs.size(), BoolMatrix(n));
    }

    ModelBuilder& block(std::size_t d, std::size_t part, std::size_t by)
    {
        interference[d].set(part, by, true);
        return *this;
    }

    ProductModel build() const
    {
        std::vector<Component> comps;
        for (std::size_t i = 0; i < n; ++i) {
            comps.push_back({"p" + std::to_string(i), grips[i]});
        }
        std::vector<BoolMatrix> empty(dirs.size(), BoolMatrix(n));
        return ProductModel("test", comps, dirs, catalog, interference, empty, empty);
    }
};

// Random interference with the given density; grippers drawn from a
// catalog of `grippers` entries.
inline ProductModel random_model(std::size_t n, std::size_t dirCount, std::size_t grippers, double density, Rng& rng)
{
    std::vector<std::string> labels;
    for (std::size_t d = 0; d < dirCount; ++d) {
        labels.push_back("d" + std::to_string(d));
    }
    ModelBuilder b(n, labels);
    b.catalog.clear();
    for (std::size_t g = 0; g < grippers; ++g) {
        b.catalog.push_back("G" + std::to_string(g + 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        b.grips[i].clear();
        for (std::size_t g = 0; g < grippers; ++g) {
            if (rng.bernoulli(0.5)) {
                b.grips[i].push_back(static_cast<GripperIndex>(g));
            }
        }
        if (b.grips[i].empty()) {
            b.grips[i].push_back(static_cast<GripperIndex>(rng.index(grippers)));
        }
        for (std::size_t d = 0; d < dirCount; ++d) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && rng.bernoulli(density)) {
                    b.block(d, i, j);
                }
            }
        }
    }
    return b.build();
}

} // namespace fuzzyplan::test

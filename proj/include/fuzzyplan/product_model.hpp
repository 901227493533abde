#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fuzzyplan {

using PartId = std::int32_t;
using DirIndex = std::uint16_t;
using GripperIndex = std::uint16_t;

/// Dense n x n boolean matrix, row-major.
class BoolMatrix {
public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

    std::size_t size() const { return n_; }
    bool operator()(std::size_t row, std::size_t col) const { return cells_[row * n_ + col] != 0; }
    void set(std::size_t row, std::size_t col, bool value) { cells_[row * n_ + col] = value ? 1 : 0; }

    bool operator==(const BoolMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Set of components already taken out of the product.
class RemovedSet {
public:
    RemovedSet() = default;
    explicit RemovedSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t universe() const { return n_; }
    void insert(PartId p) { words_[word(p)] |= bit(p); }
    void erase(PartId p) { words_[word(p)] &= ~bit(p); }
    bool contains(PartId p) const { return (words_[word(p)] & bit(p)) != 0; }
    std::size_t count() const;
    std::span<const std::uint64_t> words() const { return words_; }

    bool operator==(const RemovedSet&) const = default;

private:
    static std::size_t word(PartId p) { return static_cast<std::size_t>(p) / 64; }
    static std::uint64_t bit(PartId p) { return std::uint64_t{1} << (static_cast<std::size_t>(p) % 64); }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Direction {
    std::string label;
    std::optional<DirIndex> opposite;

    bool operator==(const Direction&) const = default;
};

struct Component {
    std::string name;
    std::vector<GripperIndex> grippers; // indices into the gripper catalog, ascending

    bool operator==(const Component&) const = default;
};

/// Known optimum of a fixture under a given weight vector; used as the
/// success target when the product is too large for exhaustive search.
struct ReferenceOptimum {
    std::array<double, 3> weights{};
    double fitness = 0.0;

    bool operator==(const ReferenceOptimum&) const = default;
};

/// Disassembly geometry of a product: one interference, contact and
/// connection matrix per direction, plus gripper compatibility.
///
/// Entry (i, j) of the interference matrix for direction d is true when
/// component j prevents removing component i along d. Immutable once built;
/// the constructor checks every structural invariant and throws
/// ValidationError naming the offending field.
class ProductModel {
public:
    ProductModel(std::string name,
                 std::vector<Component> components,
                 std::vector<Direction> directions,
                 std::vector<std::string> gripperCatalog,
                 std::vector<BoolMatrix> interference,
                 std::vector<BoolMatrix> contact,
                 std::vector<BoolMatrix> connection,
                 std::optional<ReferenceOptimum> reference = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t size() const { return components_.size(); }
    std::size_t direction_count() const { return directions_.size(); }

    const std::vector<Component>& components() const { return components_; }
    const std::vector<Direction>& directions() const { return directions_; }
    const std::vector<std::string>& gripper_catalog() const { return grippers_; }
    std::span<const GripperIndex> allowed_grippers(PartId part) const { return components_[part].grippers; }

    const BoolMatrix& interference(DirIndex d) const { return interference_[d]; }
    const BoolMatrix& contact(DirIndex d) const { return contact_[d]; }
    const BoolMatrix& connection(DirIndex d) const { return connection_[d]; }

    /// Row `part` of the interference matrix for `d`, packed into 64-bit words.
    std::span<const std::uint64_t> blockers(PartId part, DirIndex d) const;

    std::optional<DirIndex> direction_index(std::string_view label) const;
    std::optional<GripperIndex> gripper_index(std::string_view id) const;

    const std::optional<ReferenceOptimum>& reference_optimum() const { return reference_; }

    bool operator==(const ProductModel& other) const;

private:
    std::string name_;
    std::vector<Component> components_;
    std::vector<Direction> directions_;
    std::vector<std::string> grippers_;
    std::vector<BoolMatrix> interference_;
    std::vector<BoolMatrix> contact_;
    std::vector<BoolMatrix> connection_;
    std::optional<ReferenceOptimum> reference_;

    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> blocker_words_; // [dir][part][word]
};

/// True iff no component that is still present blocks `part` along `dir`.
bool removable(const ProductModel& model, PartId part, DirIndex dir, const RemovedSet& removed);

/// Copy of `model` with `part` taken out: its row and column are deleted
/// from every matrix and the remaining components are renumbered densely.
ProductModel reduce(const ProductModel& model, PartId part);

/// The six axis directions with their opposites.
std::vector<Direction> canonical_directions();

ProductModel product_from_json(const nlohmann::json& doc);
nlohmann::json product_to_json(const ProductModel& model);

ProductModel load_product(std::istream& in);
ProductModel load_product_file(const std::filesystem::path& path);
std::string serialize_product(const ProductModel& model);

} // namespace fuzzyplan

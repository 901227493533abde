#include "fuzzyplan/product_model.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fuzzyplan/errors.hpp"

namespace fuzzyplan {

using nlohmann::json;

std::size_t RemovedSet::count() const
{
    std::size_t total = 0;
    for (auto w : words_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

namespace {

void check_matrices(const std::vector<BoolMatrix>& mats, std::size_t n,
                    const std::vector<Direction>& dirs, std::string_view kind)
{
    if (mats.size() != dirs.size()) {
        throw ValidationError(std::string(kind) + ": expected one matrix per direction ("
                              + std::to_string(dirs.size()) + "), got " + std::to_string(mats.size()));
    }
    for (std::size_t d = 0; d < mats.size(); ++d) {
        const auto field = std::string(kind) + "[" + dirs[d].label + "]";
        if (mats[d].size() != n) {
            throw ValidationError(field + ": expected " + std::to_string(n) + "x" + std::to_string(n)
                                  + " matrix, got " + std::to_string(mats[d].size()) + "x"
                                  + std::to_string(mats[d].size()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (mats[d](i, i)) {
                throw ValidationError(field + ": diagonal entry (" + std::to_string(i) + "," + std::to_string(i)
                                      + ") must be 0");
            }
        }
    }
}

} // namespace

ProductModel::ProductModel(std::string name,
                           std::vector<Component> components,
                           std::vector<Direction> directions,
                           std::vector<std::string> gripperCatalog,
                           std::vector<BoolMatrix> interference,
                           std::vector<BoolMatrix> contact,
                           std::vector<BoolMatrix> connection,
                           std::optional<ReferenceOptimum> reference)
    : name_(std::move(name))
    , components_(std::move(components))
    , directions_(std::move(directions))
    , grippers_(std::move(gripperCatalog))
    , interference_(std::move(interference))
    , contact_(std::move(contact))
    , connection_(std::move(connection))
    , reference_(reference)
{
    const std::size_t n = components_.size();
    if (directions_.empty()) {
        throw ValidationError("directions: at least one direction is required");
    }
    if (directions_.size() > 0xFFFF) {
        throw ValidationError("directions: too many directions");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t d = 0; d < directions_.size(); ++d) {
        const auto& dir = directions_[d];
        if (dir.label.empty() || !seen.insert(dir.label).second) {
            throw ValidationError("directions: labels must be unique and non-empty (\"" + dir.label + "\")");
        }
        if (dir.opposite && (*dir.opposite >= directions_.size() || *dir.opposite == d)) {
            throw ValidationError("directions[" + dir.label + "]: invalid opposite");
        }
    }
    seen.clear();
    if (grippers_.empty()) {
        throw ValidationError("grippers: catalog must not be empty");
    }
    for (const auto& g : grippers_) {
        if (g.empty() || !seen.insert(g).second) {
            throw ValidationError("grippers: ids must be unique and non-empty (\"" + g + "\")");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& gs = components_[i].grippers;
        const auto field = "components[" + std::to_string(i) + "].grippers";
        if (gs.empty()) {
            throw ValidationError(field + ": at least one allowed gripper is required");
        }
        std::sort(gs.begin(), gs.end());
        if (std::adjacent_find(gs.begin(), gs.end()) != gs.end()) {
            throw ValidationError(field + ": duplicate gripper");
        }
        if (gs.back() >= grippers_.size()) {
            throw ValidationError(field + ": gripper not in catalog");
        }
    }
    check_matrices(interference_, n, directions_, "interference");
    check_matrices(contact_, n, directions_, "contact");
    check_matrices(connection_, n, directions_, "connection");

    words_per_row_ = (n + 63) / 64;
    blocker_words_.assign(directions_.size() * n * words_per_row_, 0);
    for (std::size_t d = 0; d < directions_.size(); ++d) {
        for (std::size_t i = 0; i < n; ++i) {
            auto* row = &blocker_words_[(d * n + i) * words_per_row_];
            for (std::size_t j = 0; j < n; ++j) {
                if (interference_[d](i, j)) {
                    row[j / 64] |= std::uint64_t{1} << (j % 64);
                }
            }
        }
    }
}

std::span<const std::uint64_t> ProductModel::blockers(PartId part, DirIndex d) const
{
    const auto offset = (static_cast<std::size_t>(d) * size() + static_cast<std::size_t>(part)) * words_per_row_;
    return {blocker_words_.data() + offset, words_per_row_};
}

std::optional<DirIndex> ProductModel::direction_index(std::string_view label) const
{
    for (std::size_t d = 0; d < directions_.size(); ++d) {
        if (directions_[d].label == label) {
            return static_cast<DirIndex>(d);
        }
    }
    return std::nullopt;
}

std::optional<GripperIndex> ProductModel::gripper_index(std::string_view id) const
{
    for (std::size_t g = 0; g < grippers_.size(); ++g) {
        if (grippers_[g] == id) {
            return static_cast<GripperIndex>(g);
        }
    }
    return std::nullopt;
}

bool ProductModel::operator==(const ProductModel& other) const
{
    return name_ == other.name_ && components_ == other.components_ && directions_ == other.directions_
        && grippers_ == other.grippers_ && interference_ == other.interference_ && contact_ == other.contact_
        && connection_ == other.connection_ && reference_ == other.reference_;
}

bool removable(const ProductModel& model, PartId part, DirIndex dir, const RemovedSet& removed)
{
    const auto row = model.blockers(part, dir);
    const auto gone = removed.words();
    for (std::size_t w = 0; w < row.size(); ++w) {
        if ((row[w] & ~gone[w]) != 0) {
            return false;
        }
    }
    return true;
}

ProductModel reduce(const ProductModel& model, PartId part)
{
    const std::size_t n = model.size();
    if (part < 0 || static_cast<std::size_t>(part) >= n) {
        throw ValidationError("reduce: component id " + std::to_string(part) + " out of range [0,"
                              + std::to_string(n) + ")");
    }
    const auto drop = static_cast<std::size_t>(part);

    auto shrink = [&](const BoolMatrix& m) {
        BoolMatrix out(n - 1);
        for (std::size_t i = 0, oi = 0; i < n; ++i) {
            if (i == drop) {
                continue;
            }
            for (std::size_t j = 0, oj = 0; j < n; ++j) {
                if (j == drop) {
                    continue;
                }
                out.set(oi, oj, m(i, j));
                ++oj;
            }
            ++oi;
        }
        return out;
    };

    std::vector<Component> components;
    components.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != drop) {
            components.push_back(model.components()[i]);
        }
    }
    std::vector<BoolMatrix> a, b, c;
    for (std::size_t d = 0; d < model.direction_count(); ++d) {
        const auto di = static_cast<DirIndex>(d);
        a.push_back(shrink(model.interference(di)));
        b.push_back(shrink(model.contact(di)));
        c.push_back(shrink(model.connection(di)));
    }
    return ProductModel(model.name(), std::move(components), model.directions(), model.gripper_catalog(),
                        std::move(a), std::move(b), std::move(c), model.reference_optimum());
}

std::vector<Direction> canonical_directions()
{
    return {{"+x", 1}, {"-x", 0}, {"+y", 3}, {"-y", 2}, {"+z", 5}, {"-z", 4}};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& require(const json& obj, const char* key, std::string_view where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    }
    return *it;
}

std::vector<BoolMatrix> read_matrices(const json& doc, const char* key, const std::vector<Direction>& dirs,
                                      std::size_t n)
{
    const auto& maps = require(doc, key, "product");
    if (!maps.is_object()) {
        throw ParseError(std::string(key) + ": expected an object keyed by direction label");
    }
    for (auto it = maps.begin(); it != maps.end(); ++it) {
        const bool known = std::any_of(dirs.begin(), dirs.end(), [&](const Direction& d) { return d.label == it.key(); });
        if (!known) {
            throw ValidationError(std::string(key) + "[" + it.key() + "]: unknown direction");
        }
    }
    std::vector<BoolMatrix> out;
    for (const auto& dir : dirs) {
        const auto field = std::string(key) + "[" + dir.label + "]";
        auto it = maps.find(dir.label);
        if (it == maps.end()) {
            throw ValidationError(field + ": missing matrix");
        }
        if (!it->is_array()) {
            throw ParseError(field + ": expected an array of rows");
        }
        const auto& rows = *it;
        if (rows.size() != n) {
            throw ValidationError(field + ": expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
        }
        BoolMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array()) {
                throw ParseError(field + ": row " + std::to_string(i) + " is not an array");
            }
            if (rows[i].size() != n) {
                throw ValidationError(field + ": expected " + std::to_string(n) + "x" + std::to_string(n)
                                      + " matrix, row " + std::to_string(i) + " has " + std::to_string(rows[i].size())
                                      + " entries");
            }
            for (std::size_t j = 0; j < n; ++j) {
                const auto& cell = rows[i][j];
                if (cell.is_boolean()) {
                    m.set(i, j, cell.get<bool>());
                } else if (cell.is_number_integer() && (cell.get<int>() == 0 || cell.get<int>() == 1)) {
                    m.set(i, j, cell.get<int>() == 1);
                } else {
                    throw ParseError(field + ": entry (" + std::to_string(i) + "," + std::to_string(j)
                                     + ") must be 0 or 1");
                }
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

json write_matrices(const ProductModel& model, const BoolMatrix& (ProductModel::*get)(DirIndex) const)
{
    json out = json::object();
    const std::size_t n = model.size();
    for (std::size_t d = 0; d < model.direction_count(); ++d) {
        const auto& m = (model.*get)(static_cast<DirIndex>(d));
        json rows = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < n; ++j) {
                row.push_back(m(i, j) ? 1 : 0);
            }
            rows.push_back(std::move(row));
        }
        out[model.directions()[d].label] = std::move(rows);
    }
    return out;
}

std::string opposite_label(const std::string& label)
{
    if (label.size() >= 2 && (label[0] == '+' || label[0] == '-')) {
        return (label[0] == '+' ? "-" : "+") + label.substr(1);
    }
    return {};
}

} // namespace

ProductModel product_from_json(const json& doc)
{
    try {
        if (!doc.is_object()) {
            throw ParseError("product: expected a JSON object");
        }
        const auto name = doc.value("name", std::string{});

        std::vector<std::string> catalog;
        for (const auto& g : require(doc, "grippers", "product")) {
            catalog.push_back(g.get<std::string>());
        }

        std::vector<Direction> dirs;
        for (const auto& d : require(doc, "directions", "product")) {
            dirs.push_back({d.get<std::string>(), std::nullopt});
        }
        auto index_of = [&](const std::string& label) -> std::optional<DirIndex> {
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                if (dirs[i].label == label) {
                    return static_cast<DirIndex>(i);
                }
            }
            return std::nullopt;
        };
        if (auto it = doc.find("opposites"); it != doc.end()) {
            for (auto kv = it->begin(); kv != it->end(); ++kv) {
                auto from = index_of(kv.key());
                auto to = index_of(kv.value().get<std::string>());
                if (!from || !to) {
                    throw ValidationError("opposites[" + kv.key() + "]: unknown direction");
                }
                dirs[*from].opposite = *to;
            }
        } else {
            for (auto& d : dirs) {
                d.opposite = index_of(opposite_label(d.label));
            }
        }

        std::vector<Component> components;
        const auto& comps = require(doc, "components", "product");
        if (!comps.is_array()) {
            throw ParseError("components: expected an array");
        }
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& c = comps[i];
            const auto where = "components[" + std::to_string(i) + "]";
            if (auto id = c.find("id"); id != c.end() && id->get<std::int64_t>() != static_cast<std::int64_t>(i)) {
                throw ValidationError(where + ".id: expected " + std::to_string(i) + " (ids are dense and ordered)");
            }
            Component comp;
            comp.name = c.value("name", "part" + std::to_string(i + 1));
            for (const auto& g : require(c, "grippers", where)) {
                const auto gid = g.get<std::string>();
                auto pos = std::find(catalog.begin(), catalog.end(), gid);
                if (pos == catalog.end()) {
                    throw ValidationError(where + ".grippers: \"" + gid + "\" is not in the gripper catalog");
                }
                comp.grippers.push_back(static_cast<GripperIndex>(pos - catalog.begin()));
            }
            components.push_back(std::move(comp));
        }

        const auto n = components.size();
        auto a = read_matrices(doc, "interference", dirs, n);
        auto b = read_matrices(doc, "contact", dirs, n);
        auto c = read_matrices(doc, "connection", dirs, n);

        std::optional<ReferenceOptimum> reference;
        if (auto it = doc.find("reference_optimum"); it != doc.end()) {
            ReferenceOptimum ref;
            const auto& w = require(*it, "weights", "reference_optimum");
            if (!w.is_array() || w.size() != 3) {
                throw ParseError("reference_optimum.weights: expected three numbers");
            }
            for (std::size_t k = 0; k < 3; ++k) {
                ref.weights[k] = w[k].get<double>();
            }
            ref.fitness = require(*it, "fitness", "reference_optimum").get<double>();
            reference = ref;
        }

        return ProductModel(name, std::move(components), std::move(dirs), std::move(catalog), std::move(a),
                            std::move(b), std::move(c), reference);
    } catch (const json::exception& e) {
        throw ParseError(std::string("product: ") + e.what());
    }
}

json product_to_json(const ProductModel& model)
{
    json doc;
    doc["name"] = model.name();
    doc["grippers"] = model.gripper_catalog();
    json dirs = json::array();
    json opposites = json::object();
    for (const auto& d : model.directions()) {
        dirs.push_back(d.label);
        if (d.opposite) {
            opposites[d.label] = model.directions()[*d.opposite].label;
        }
    }
    doc["directions"] = std::move(dirs);
    doc["opposites"] = std::move(opposites);
    json comps = json::array();
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto& c = model.components()[i];
        json grips = json::array();
        for (auto g : c.grippers) {
            grips.push_back(model.gripper_catalog()[g]);
        }
        comps.push_back({{"id", i}, {"name", c.name}, {"grippers", std::move(grips)}});
    }
    doc["components"] = std::move(comps);
    doc["interference"] = write_matrices(model, &ProductModel::interference);
    doc["contact"] = write_matrices(model, &ProductModel::contact);
    doc["connection"] = write_matrices(model, &ProductModel::connection);
    if (const auto& ref = model.reference_optimum()) {
        doc["reference_optimum"] = {{"weights", ref->weights}, {"fitness", ref->fitness}};
    }
    return doc;
}

ProductModel load_product(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("product: ") + e.what());
    }
    return product_from_json(doc);
}

ProductModel load_product_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open product file " + path.string());
    }
    return load_product(in);
}

std::string serialize_product(const ProductModel& model)
{
    return product_to_json(model).dump(2) + "\n";
}

} // namespace fuzzyplan

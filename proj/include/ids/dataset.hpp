#pragma once

// NSL-KDD ingestion: parsing the 42/43-field comma-separated layout,
// label -> (binary, category) mapping, ordinal categorical encoding,
// feature policies, z-score standardization, stratified splitting and
// a versioned on-disk container for encoded datasets.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ids/error.hpp"
#include "ids/matrix.hpp"

namespace ids::data {

inline constexpr std::size_t kFeatureCount = 41;

// 1-based feature number, F1..F41.
struct FeatureId {
    std::uint16_t number = 0;
    auto operator<=>(const FeatureId&) const = default;
};

std::string to_string(FeatureId id);
// Accepts "F27", "f27" or "27".
FeatureId parse_feature_id(const std::string& text);

enum class FeatureKind : std::uint8_t { numeric, categorical };
enum class FeatureCategory : std::uint8_t { basic, content, time_based, host_based };

struct SchemaEntry {
    FeatureId id;
    const char* name;
    FeatureKind kind;
    FeatureCategory category;
};

// The fixed 41-feature NSL-KDD schema. Categorical features are
// exactly F2 (protocol), F3 (service), F4 (flag); content features
// are F11..F22.
const std::array<SchemaEntry, kFeatureCount>& schema();

enum class AttackCategory : std::uint8_t { normal, dos, r2l, u2r, probe };
const char* to_string(AttackCategory c);

enum class Origin : std::uint8_t { train, test };

struct RawRecord {
    std::vector<std::string> features;  // 41 tokens in schema order
    std::string label;
    std::optional<int> difficulty;      // present only in 43-field files
};

// One RawRecord per non-empty line. Throws ParseError (with the line
// number) on a field count other than 42/43 or a non-numeric token in
// a numeric position.
std::vector<RawRecord> parse_nslkdd(std::istream& source);
std::vector<RawRecord> parse_nslkdd_file(const std::string& path);

struct LabelInfo {
    std::uint8_t binary;  // attack = 1
    AttackCategory category;
};

// Trims, lowercases and resolves spelling aliases before looking the
// name up in the 40-entry table (includes test-only attacks). Throws
// ParseError for names outside the table.
LabelInfo map_label(const std::string& label);

// Ordinal vocabularies for the categorical features, built from the
// training split only. Values are indexed in lexicographic order;
// unseen lookup yields the reserved index |V|.
class CategoryVocabulary {
public:
    static CategoryVocabulary build(const std::vector<RawRecord>& training_records);

    std::size_t encode(FeatureId feature, const std::string& token) const;
    std::size_t size(FeatureId feature) const;
    const std::vector<std::string>& values(FeatureId feature) const;

private:
    struct PerFeature {
        std::vector<std::string> ordered;
        std::unordered_map<std::string, std::size_t> index;
    };
    // slots for F2, F3, F4
    std::array<PerFeature, 3> features_;
    static std::size_t slot(FeatureId feature);
};

struct EncodedDataset {
    Matrix matrix;                        // n x d
    std::vector<FeatureId> column_ids;    // size d
    std::vector<std::uint8_t> labels;     // attack = 1
    std::vector<AttackCategory> categories;
    Origin origin = Origin::train;

    std::size_t n() const { return matrix.rows(); }
    std::size_t dim() const { return matrix.cols(); }
    int column_index(FeatureId id) const;  // -1 if absent
};

EncodedDataset encode(const std::vector<RawRecord>& records,
                      const CategoryVocabulary& vocabulary, Origin origin);

struct FeaturePolicy {
    enum class Kind : std::uint8_t { all, drop_content, basic6, explicit_list };
    Kind kind = Kind::all;
    std::vector<FeatureId> ids;  // explicit_list only

    static FeaturePolicy all() { return {}; }
    static FeaturePolicy drop_content() { return {Kind::drop_content, {}}; }
    static FeaturePolicy basic6() { return {Kind::basic6, {}}; }
    static FeaturePolicy explicit_list(std::vector<FeatureId> ids) {
        return {Kind::explicit_list, std::move(ids)};
    }
    // "all" | "drop_content" | "basic6" | "F1,F5,F23"
    static FeaturePolicy parse(const std::string& text);
    std::string describe() const;
};

// Kept columns always stay in schema order. Throws ConfigError when an
// explicit list names a feature the dataset does not carry.
EncodedDataset apply_feature_policy(const EncodedDataset& ds, const FeaturePolicy& policy);

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> divisor;  // stddev, or 1 for columns floored at 1e-8
    std::vector<FeatureId> column_ids;
};

// Fit on the training origin only (sample stddev, divisor n-1).
Standardizer fit_standardizer(const EncodedDataset& train);
EncodedDataset apply_standardizer(const Standardizer& std, const EncodedDataset& ds);

EncodedDataset row_subset(const EncodedDataset& ds, const std::vector<std::uint32_t>& rows);

// Per binary class, part_a receives round(ratio * class count) rows,
// chosen by a seeded shuffle; row order inside each part follows the
// input. Throws ConfigError for ratio outside (0,1) or a class with
// fewer than 2 rows.
std::pair<EncodedDataset, EncodedDataset> stratified_split(const EncodedDataset& ds,
                                                           double ratio,
                                                           std::uint64_t seed);

// Versioned binary container (little-endian):
//   bytes 0..7   magic "IDSDATA1"
//   u32          version (currently 1)
//   u8           origin (0 train, 1 test)
//   u64 n, u64 d
//   u16[d]       column feature numbers
//   u8[n]        labels
//   u8[n]        categories
//   f64[n*d]     matrix, row-major
void save_dataset(const EncodedDataset& ds, const std::string& path);
EncodedDataset load_dataset(const std::string& path);

}  // namespace ids::data

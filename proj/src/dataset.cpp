#include "ids/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "ids/rng.hpp"

namespace ids::data {

namespace {

constexpr FeatureCategory kBasic = FeatureCategory::basic;
constexpr FeatureCategory kContent = FeatureCategory::content;
constexpr FeatureCategory kTime = FeatureCategory::time_based;
constexpr FeatureCategory kHost = FeatureCategory::host_based;
constexpr FeatureKind kNum = FeatureKind::numeric;
constexpr FeatureKind kCat = FeatureKind::categorical;

constexpr std::array<SchemaEntry, kFeatureCount> kSchema = {{
    {{1}, "duration", kNum, kBasic},
    {{2}, "protocol_type", kCat, kBasic},
    {{3}, "service", kCat, kBasic},
    {{4}, "flag", kCat, kBasic},
    {{5}, "src_bytes", kNum, kBasic},
    {{6}, "dst_bytes", kNum, kBasic},
    {{7}, "land", kNum, kBasic},
    {{8}, "wrong_fragment", kNum, kBasic},
    {{9}, "urgent", kNum, kBasic},
    {{10}, "hot", kNum, kBasic},
    {{11}, "num_failed_logins", kNum, kContent},
    {{12}, "logged_in", kNum, kContent},
    {{13}, "num_compromised", kNum, kContent},
    {{14}, "root_shell", kNum, kContent},
    {{15}, "su_attempted", kNum, kContent},
    {{16}, "num_root", kNum, kContent},
    {{17}, "num_file_creations", kNum, kContent},
    {{18}, "num_shells", kNum, kContent},
    {{19}, "num_access_files", kNum, kContent},
    {{20}, "num_outbound_cmds", kNum, kContent},
    {{21}, "is_host_login", kNum, kContent},
    {{22}, "is_guest_login", kNum, kContent},
    {{23}, "count", kNum, kTime},
    {{24}, "srv_count", kNum, kTime},
    {{25}, "serror_rate", kNum, kTime},
    {{26}, "srv_serror_rate", kNum, kTime},
    {{27}, "rerror_rate", kNum, kTime},
    {{28}, "srv_rerror_rate", kNum, kTime},
    {{29}, "same_srv_rate", kNum, kTime},
    {{30}, "diff_srv_rate", kNum, kTime},
    {{31}, "srv_diff_host_rate", kNum, kTime},
    {{32}, "dst_host_count", kNum, kHost},
    {{33}, "dst_host_srv_count", kNum, kHost},
    {{34}, "dst_host_same_srv_rate", kNum, kHost},
    {{35}, "dst_host_diff_srv_rate", kNum, kHost},
    {{36}, "dst_host_same_src_port_rate", kNum, kHost},
    {{37}, "dst_host_srv_diff_host_rate", kNum, kHost},
    {{38}, "dst_host_serror_rate", kNum, kHost},
    {{39}, "dst_host_srv_serror_rate", kNum, kHost},
    {{40}, "dst_host_rerror_rate", kNum, kHost},
    {{41}, "dst_host_srv_rerror_rate", kNum, kHost},
}};

struct LabelEntry {
    const char* name;
    AttackCategory category;
};

// Canonical attack tokens as they appear in the dataset files.
constexpr LabelEntry kAttackTable[] = {
    // denial of service
    {"apache2", AttackCategory::dos},
    {"back", AttackCategory::dos},
    {"land", AttackCategory::dos},
    {"mailbomb", AttackCategory::dos},
    {"neptune", AttackCategory::dos},
    {"pod", AttackCategory::dos},
    {"processtable", AttackCategory::dos},
    {"smurf", AttackCategory::dos},
    {"teardrop", AttackCategory::dos},
    {"udpstorm", AttackCategory::dos},
    // remote to local
    {"ftp_write", AttackCategory::r2l},
    {"guess_passwd", AttackCategory::r2l},
    {"imap", AttackCategory::r2l},
    {"multihop", AttackCategory::r2l},
    {"named", AttackCategory::r2l},
    {"phf", AttackCategory::r2l},
    {"sendmail", AttackCategory::r2l},
    {"snmpgetattack", AttackCategory::r2l},
    {"snmpguess", AttackCategory::r2l},
    {"spy", AttackCategory::r2l},
    {"warezclient", AttackCategory::r2l},
    {"warezmaster", AttackCategory::r2l},
    {"worm", AttackCategory::r2l},
    {"xlock", AttackCategory::r2l},
    {"xsnoop", AttackCategory::r2l},
    // user to root
    {"buffer_overflow", AttackCategory::u2r},
    {"httptunnel", AttackCategory::u2r},
    {"loadmodule", AttackCategory::u2r},
    {"perl", AttackCategory::u2r},
    {"ps", AttackCategory::u2r},
    {"rootkit", AttackCategory::u2r},
    {"sqlattack", AttackCategory::u2r},
    {"xterm", AttackCategory::u2r},
    // probing
    {"ipsweep", AttackCategory::probe},
    {"mscan", AttackCategory::probe},
    {"nmap", AttackCategory::probe},
    {"portsweep", AttackCategory::probe},
    {"saint", AttackCategory::probe},
    {"satan", AttackCategory::probe},
};

// Spelling variants seen in the literature, mapped onto dataset tokens.
constexpr std::pair<const char*, const char*> kLabelAliases[] = {
    {"guess_password", "guess_passwd"},
    {"httpstuneel", "httptunnel"},
    {"portswep", "portsweep"},
    {"snmppgetattack", "snmpgetattack"},
    {"snmppguess", "snmpguess"},
    {"sqllattack", "sqlattack"},
};

std::string normalize_label(const std::string& raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && (std::isspace(static_cast<unsigned char>(raw[e - 1])) || raw[e - 1] == '.'))
        --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    for (const auto& [alias, canonical] : kLabelAliases)
        if (out == alias) return canonical;
    return out;
}

bool parse_finite_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

void split_fields(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.emplace_back(line.substr(start));
            return;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

const std::array<SchemaEntry, kFeatureCount>& schema() { return kSchema; }

std::string to_string(FeatureId id) { return "F" + std::to_string(id.number); }

FeatureId parse_feature_id(const std::string& text) {
    std::string t = text;
    if (!t.empty() && (t[0] == 'F' || t[0] == 'f')) t.erase(0, 1);
    int num = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), num);
    if (ec != std::errc{} || ptr != t.data() + t.size() || num < 1 ||
        num > static_cast<int>(kFeatureCount))
        throw ConfigError("invalid feature id '" + text + "' (expected F1..F41)");
    return {static_cast<std::uint16_t>(num)};
}

const char* to_string(AttackCategory c) {
    switch (c) {
        case AttackCategory::normal: return "normal";
        case AttackCategory::dos: return "dos";
        case AttackCategory::r2l: return "r2l";
        case AttackCategory::u2r: return "u2r";
        case AttackCategory::probe: return "probe";
    }
    return "?";
}

LabelInfo map_label(const std::string& label) {
    const std::string name = normalize_label(label);
    if (name == "normal") return {0, AttackCategory::normal};
    for (const auto& entry : kAttackTable)
        if (name == entry.name) return {1, entry.category};
    throw ParseError("unknown label '" + name + "'");
}

std::vector<RawRecord> parse_nslkdd(std::istream& source) {
    std::vector<RawRecord> records;
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_number = 0;
    while (std::getline(source, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        split_fields(line, fields);
        if (fields.size() != kFeatureCount + 1 && fields.size() != kFeatureCount + 2)
            throw ParseError("line " + std::to_string(line_number) + ": expected 42 or 43 fields, got " +
                             std::to_string(fields.size()));
        RawRecord rec;
        rec.features.assign(fields.begin(), fields.begin() + kFeatureCount);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            if (kSchema[i].kind != FeatureKind::numeric) continue;
            double v;
            if (!parse_finite_double(rec.features[i], v))
                throw ParseError("line " + std::to_string(line_number) + ": feature " +
                                 to_string(kSchema[i].id) + " token '" + rec.features[i] +
                                 "' is not a finite number");
        }
        rec.label = fields[kFeatureCount];
        if (fields.size() == kFeatureCount + 2) {
            int difficulty = 0;
            const std::string& tok = fields[kFeatureCount + 1];
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), difficulty);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw ParseError("line " + std::to_string(line_number) +
                                 ": difficulty token '" + tok + "' is not an integer");
            rec.difficulty = difficulty;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RawRecord> parse_nslkdd_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_nslkdd(in);
}

std::size_t CategoryVocabulary::slot(FeatureId feature) {
    switch (feature.number) {
        case 2: return 0;
        case 3: return 1;
        case 4: return 2;
    }
    throw ConfigError("feature " + to_string(feature) + " is not categorical");
}

CategoryVocabulary CategoryVocabulary::build(const std::vector<RawRecord>& training_records) {
    CategoryVocabulary vocab;
    constexpr std::array<std::size_t, 3> kColumns = {1, 2, 3};  // F2, F3, F4
    for (std::size_t s = 0; s < kColumns.size(); ++s) {
        std::set<std::string> distinct;
        for (const auto& rec : training_records) distinct.insert(rec.features[kColumns[s]]);
        auto& per = vocab.features_[s];
        per.ordered.assign(distinct.begin(), distinct.end());
        for (std::size_t i = 0; i < per.ordered.size(); ++i) per.index.emplace(per.ordered[i], i);
    }
    return vocab;
}

std::size_t CategoryVocabulary::encode(FeatureId feature, const std::string& token) const {
    const auto& per = features_[slot(feature)];
    const auto it = per.index.find(token);
    return it == per.index.end() ? per.ordered.size() : it->second;
}

std::size_t CategoryVocabulary::size(FeatureId feature) const {
    return features_[slot(feature)].ordered.size();
}

const std::vector<std::string>& CategoryVocabulary::values(FeatureId feature) const {
    return features_[slot(feature)].ordered;
}

int EncodedDataset::column_index(FeatureId id) const {
    for (std::size_t i = 0; i < column_ids.size(); ++i)
        if (column_ids[i] == id) return static_cast<int>(i);
    return -1;
}

EncodedDataset encode(const std::vector<RawRecord>& records,
                      const CategoryVocabulary& vocabulary, Origin origin) {
    EncodedDataset ds;
    ds.origin = origin;
    ds.matrix = Matrix(records.size(), kFeatureCount);
    ds.column_ids.reserve(kFeatureCount);
    for (const auto& entry : kSchema) ds.column_ids.push_back(entry.id);
    ds.labels.resize(records.size());
    ds.categories.resize(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const RawRecord& rec = records[r];
        double* row = ds.matrix.row(r);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            if (kSchema[c].kind == FeatureKind::categorical) {
                row[c] = static_cast<double>(vocabulary.encode(kSchema[c].id, rec.features[c]));
            } else {
                double v = 0.0;
                parse_finite_double(rec.features[c], v);
                row[c] = v;
            }
        }
        const LabelInfo info = map_label(rec.label);
        ds.labels[r] = info.binary;
        ds.categories[r] = info.category;
    }
    return ds;
}

FeaturePolicy FeaturePolicy::parse(const std::string& text) {
    if (text == "all") return all();
    if (text == "drop_content") return drop_content();
    if (text == "basic6") return basic6();
    std::vector<FeatureId> ids;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) ids.push_back(parse_feature_id(tok));
    }
    if (ids.empty()) throw ConfigError("empty feature policy '" + text + "'");
    return explicit_list(std::move(ids));
}

std::string FeaturePolicy::describe() const {
    switch (kind) {
        case Kind::all: return "all";
        case Kind::drop_content: return "drop_content";
        case Kind::basic6: return "basic6";
        case Kind::explicit_list: {
            std::string out;
            for (const auto& id : ids) {
                if (!out.empty()) out.push_back(',');
                out += to_string(id);
            }
            return out;
        }
    }
    return "?";
}

EncodedDataset apply_feature_policy(const EncodedDataset& ds, const FeaturePolicy& policy) {
    std::vector<std::size_t> keep;
    switch (policy.kind) {
        case FeaturePolicy::Kind::all:
            for (std::size_t c = 0; c < ds.dim(); ++c) keep.push_back(c);
            break;
        case FeaturePolicy::Kind::drop_content:
            for (std::size_t c = 0; c < ds.dim(); ++c) {
                const std::uint16_t num = ds.column_ids[c].number;
                if (num < 11 || num > 22) keep.push_back(c);
            }
            break;
        case FeaturePolicy::Kind::basic6: {
            static constexpr std::uint16_t kBasic6[] = {1, 2, 5, 6, 23, 24};
            for (std::size_t c = 0; c < ds.dim(); ++c)
                for (std::uint16_t want : kBasic6)
                    if (ds.column_ids[c].number == want) keep.push_back(c);
            break;
        }
        case FeaturePolicy::Kind::explicit_list: {
            for (const FeatureId id : policy.ids)
                if (ds.column_index(id) < 0)
                    throw ConfigError("feature " + to_string(id) + " not present in dataset");
            for (std::size_t c = 0; c < ds.dim(); ++c)
                for (const FeatureId id : policy.ids)
                    if (ds.column_ids[c] == id) keep.push_back(c);
            break;
        }
    }
    EncodedDataset out;
    out.origin = ds.origin;
    out.labels = ds.labels;
    out.categories = ds.categories;
    out.matrix = Matrix(ds.n(), keep.size());
    out.column_ids.reserve(keep.size());
    for (std::size_t c : keep) out.column_ids.push_back(ds.column_ids[c]);
    for (std::size_t r = 0; r < ds.n(); ++r) {
        const double* src = ds.matrix.row(r);
        double* dst = out.matrix.row(r);
        for (std::size_t i = 0; i < keep.size(); ++i) dst[i] = src[keep[i]];
    }
    return out;
}

Standardizer fit_standardizer(const EncodedDataset& train) {
    if (train.origin != Origin::train)
        throw ConfigError("standardizer must be fitted on the training origin");
    const std::size_t n = train.n(), d = train.dim();
    if (n == 0) throw ConfigError("cannot fit standardizer on an empty dataset");
    Standardizer s;
    s.column_ids = train.column_ids;
    s.mean.assign(d, 0.0);
    s.divisor.assign(d, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = train.matrix.row(r);
        for (std::size_t c = 0; c < d; ++c) s.mean[c] += row[c];
    }
    for (std::size_t c = 0; c < d; ++c) s.mean[c] /= static_cast<double>(n);
    if (n > 1) {
        std::vector<double> ss(d, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double* row = train.matrix.row(r);
            for (std::size_t c = 0; c < d; ++c) {
                const double dev = row[c] - s.mean[c];
                ss[c] += dev * dev;
            }
        }
        for (std::size_t c = 0; c < d; ++c) {
            const double sd = std::sqrt(ss[c] / static_cast<double>(n - 1));
            s.divisor[c] = sd < 1e-8 ? 1.0 : sd;
        }
    }
    return s;
}

EncodedDataset apply_standardizer(const Standardizer& std_, const EncodedDataset& ds) {
    if (std_.column_ids != ds.column_ids)
        throw ConfigError("standardizer columns do not match dataset columns");
    EncodedDataset out = ds;
    const std::size_t d = ds.dim();
    for (std::size_t r = 0; r < ds.n(); ++r) {
        double* row = out.matrix.row(r);
        for (std::size_t c = 0; c < d; ++c) row[c] = (row[c] - std_.mean[c]) / std_.divisor[c];
    }
    return out;
}

EncodedDataset row_subset(const EncodedDataset& ds, const std::vector<std::uint32_t>& rows) {
    EncodedDataset out;
    out.origin = ds.origin;
    out.column_ids = ds.column_ids;
    out.matrix = Matrix(rows.size(), ds.dim());
    out.labels.resize(rows.size());
    out.categories.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::uint32_t r = rows[i];
        std::memcpy(out.matrix.row(i), ds.matrix.row(r), ds.dim() * sizeof(double));
        out.labels[i] = ds.labels[r];
        out.categories[i] = ds.categories[r];
    }
    return out;
}

std::pair<EncodedDataset, EncodedDataset> stratified_split(const EncodedDataset& ds,
                                                           double ratio,
                                                           std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw ConfigError("split ratio must lie strictly between 0 and 1");
    std::array<std::vector<std::uint32_t>, 2> by_class;
    for (std::size_t r = 0; r < ds.n(); ++r)
        by_class[ds.labels[r]].push_back(static_cast<std::uint32_t>(r));
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < 2)
            throw ConfigError(std::string("class '") + (c == 0 ? "normal" : "attack") +
                              "' has fewer than 2 rows");
    std::vector<std::uint32_t> part_a, part_b;
    for (int c = 0; c < 2; ++c) {
        auto& rows = by_class[c];
        Rng rng(seed_mix(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(rows);
        const auto take = static_cast<std::size_t>(
            std::llround(ratio * static_cast<double>(rows.size())));
        part_a.insert(part_a.end(), rows.begin(), rows.begin() + take);
        part_b.insert(part_b.end(), rows.begin() + take, rows.end());
    }
    std::sort(part_a.begin(), part_a.end());
    std::sort(part_b.begin(), part_b.end());
    return {row_subset(ds, part_a), row_subset(ds, part_b)};
}

namespace {

constexpr char kMagic[8] = {'I', 'D', 'S', 'D', 'A', 'T', 'A', '1'};
constexpr std::uint32_t kContainerVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_dataset(const EncodedDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kContainerVersion);
    write_pod(out, static_cast<std::uint8_t>(ds.origin));
    write_pod(out, static_cast<std::uint64_t>(ds.n()));
    write_pod(out, static_cast<std::uint64_t>(ds.dim()));
    for (const FeatureId id : ds.column_ids) write_pod(out, id.number);
    out.write(reinterpret_cast<const char*>(ds.labels.data()),
              static_cast<std::streamsize>(ds.labels.size()));
    for (const AttackCategory c : ds.categories) write_pod(out, static_cast<std::uint8_t>(c));
    out.write(reinterpret_cast<const char*>(ds.matrix.data()),
              static_cast<std::streamsize>(ds.n() * ds.dim() * sizeof(double)));
    if (!out) throw ParseError("short write to '" + path + "'");
}

EncodedDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw ParseError("'" + path + "' is not a dataset container");
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != kContainerVersion)
        throw ParseError("unsupported container version " + std::to_string(version));
    std::uint8_t origin = 0;
    std::uint64_t n = 0, d = 0;
    read_pod(in, origin);
    read_pod(in, n);
    read_pod(in, d);
    EncodedDataset ds;
    ds.origin = static_cast<Origin>(origin);
    ds.column_ids.resize(d);
    for (auto& id : ds.column_ids) read_pod(in, id.number);
    ds.labels.resize(n);
    in.read(reinterpret_cast<char*>(ds.labels.data()), static_cast<std::streamsize>(n));
    ds.categories.resize(n);
    for (auto& c : ds.categories) {
        std::uint8_t v = 0;
        read_pod(in, v);
        c = static_cast<AttackCategory>(v);
    }
    ds.matrix = Matrix(n, d);
    in.read(reinterpret_cast<char*>(ds.matrix.data()),
            static_cast<std::streamsize>(n * d * sizeof(double)));
    if (!in) throw ParseError("'" + path + "' is truncated");
    return ds;
}

}  // namespace ids::data

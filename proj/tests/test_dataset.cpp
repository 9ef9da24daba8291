#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ids/dataset.hpp"
#include "ids/rng.hpp"

using namespace ids;
using namespace ids::data;

namespace {

// 41 features + label (+ difficulty); tokens chosen to be easy to spot
std::string make_line(const std::string& proto, const std::string& service,
                      const std::string& flag, const std::string& label,
                      const std::string& difficulty = "") {
    std::ostringstream line;
    line << "7," << proto << "," << service << "," << flag << ",491,0,0,0,0,0";  // F1..F10
    line << ",0,1,0,0,0,0,0,0,0,0,0,0";                                          // F11..F22
    line << ",2,2,0.00,0.00,0.00,0.00,1.00,0.00,0.00";                           // F23..F31
    line << ",150,25,0.17,0.03,0.17,0.00,0.00,0.00,0.05,0.00";                   // F32..F41
    line << "," << label;
    if (!difficulty.empty()) line << "," << difficulty;
    return line.str();
}

std::vector<RawRecord> parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_nslkdd(in);
}

}  // namespace

TEST_CASE("schema structure follows the published table") {
    const auto& s = schema();
    REQUIRE(s.size() == 41);
    std::size_t categorical = 0, content = 0;
    for (const auto& e : s) {
        if (e.kind == FeatureKind::categorical) {
            ++categorical;
            CHECK((e.id.number == 2 || e.id.number == 3 || e.id.number == 4));
        }
        if (e.category == FeatureCategory::content) {
            ++content;
            CHECK(e.id.number >= 11);
            CHECK(e.id.number <= 22);
        }
    }
    CHECK(categorical == 3);
    CHECK(content == 12);
    CHECK(s[0].name == std::string("duration"));
    CHECK(s[40].name == std::string("dst_host_srv_rerror_rate"));
}

TEST_CASE("parsing 42- and 43-field lines") {
    const auto records =
        parse_text(make_line("tcp", "http", "SF", "normal") + "\n" +
                   make_line("tcp", "private", "S0", "neptune", "21") + "\n\n");
    REQUIRE(records.size() == 2);
    CHECK_FALSE(records[0].difficulty.has_value());
    CHECK(records[0].label == "normal");
    REQUIRE(records[1].difficulty.has_value());
    CHECK(*records[1].difficulty == 21);
    CHECK(records[1].features.size() == 41);
}

TEST_CASE("parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_text("1,2,3\n"), doctest::Contains("line 1"), ParseError);
    const std::string good = make_line("tcp", "http", "SF", "normal");
    CHECK_THROWS_WITH_AS(parse_text(good + "\n1,2,3\n"), doctest::Contains("line 2"),
                         ParseError);
    // non-numeric token in a numeric position (F5)
    std::string bad = good;
    bad.replace(bad.find("491"), 3, "oops");
    CHECK_THROWS_WITH_AS(parse_text(bad + "\n"), doctest::Contains("F5"), ParseError);
}

TEST_CASE("label mapping covers the 40-entry table with aliases") {
    CHECK(map_label("normal").binary == 0);
    CHECK(map_label("normal").category == AttackCategory::normal);
    CHECK(map_label("neptune").binary == 1);
    CHECK(map_label("neptune").category == AttackCategory::dos);
    CHECK(map_label("xterm").category == AttackCategory::u2r);
    CHECK(map_label("warezclient").category == AttackCategory::r2l);
    CHECK(map_label("mscan").category == AttackCategory::probe);
    // test-only attacks are present
    CHECK(map_label("apache2").category == AttackCategory::dos);
    CHECK(map_label("httptunnel").category == AttackCategory::u2r);
    // normalization and aliases
    CHECK(map_label("  Neptune.\n").category == AttackCategory::dos);
    CHECK(map_label("Guess_Password").category == AttackCategory::r2l);
    CHECK(map_label("SQLlattack").category == AttackCategory::u2r);
    CHECK(map_label("Portswep").category == AttackCategory::probe);
    CHECK_THROWS_WITH_AS(map_label("zergrush"), doctest::Contains("zergrush"), ParseError);
}

TEST_CASE("vocabulary encoding is lexicographic with a reserved unknown index") {
    const auto records = parse_text(make_line("udp", "http", "SF", "normal") + "\n" +
                                    make_line("tcp", "smtp", "S0", "neptune") + "\n" +
                                    make_line("icmp", "http", "REJ", "normal") + "\n");
    const auto vocab = CategoryVocabulary::build(records);
    CHECK(vocab.size({2}) == 3);
    CHECK(vocab.encode({2}, "icmp") == 0);
    CHECK(vocab.encode({2}, "tcp") == 1);
    CHECK(vocab.encode({2}, "udp") == 2);
    CHECK(vocab.encode({2}, "sctp") == 3);  // unseen -> |V|
    CHECK(vocab.encode({3}, "zzz_service") == vocab.size({3}));
}

TEST_CASE("encoding produces the expected matrix values") {
    const auto train = parse_text(make_line("udp", "http", "SF", "normal") + "\n" +
                                  make_line("tcp", "smtp", "S0", "neptune") + "\n" +
                                  make_line("icmp", "http", "REJ", "back") + "\n");
    const auto vocab = CategoryVocabulary::build(train);
    const auto ds = encode(train, vocab, Origin::train);
    CHECK(ds.n() == 3);
    CHECK(ds.dim() == 41);
    CHECK(ds.matrix(0, 0) == 7.0);       // duration
    CHECK(ds.matrix(0, 1) == 2.0);       // udp
    CHECK(ds.matrix(1, 1) == 1.0);       // tcp
    CHECK(ds.matrix(0, 4) == 491.0);     // src_bytes
    CHECK(ds.labels == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(ds.categories[1] == AttackCategory::dos);
    CHECK(ds.categories[0] == AttackCategory::normal);
    // no non-finite values anywhere
    for (std::size_t i = 0; i < ds.n() * ds.dim(); ++i)
        CHECK(std::isfinite(ds.matrix.data()[i]));
}

TEST_CASE("feature policies") {
    const auto train = parse_text(make_line("udp", "http", "SF", "normal") + "\n" +
                                  make_line("tcp", "smtp", "S0", "neptune") + "\n");
    const auto ds = encode(train, CategoryVocabulary::build(train), Origin::train);

    const auto dropped = apply_feature_policy(ds, FeaturePolicy::drop_content());
    CHECK(dropped.dim() == 29);
    for (const auto id : dropped.column_ids) {
        CHECK((id.number < 11 || id.number > 22));
    }

    const auto basic = apply_feature_policy(ds, FeaturePolicy::basic6());
    REQUIRE(basic.dim() == 6);
    const std::vector<std::uint16_t> want = {1, 2, 5, 6, 23, 24};
    for (std::size_t i = 0; i < 6; ++i) CHECK(basic.column_ids[i].number == want[i]);

    const auto all = apply_feature_policy(ds, FeaturePolicy::all());
    CHECK(all.column_ids == ds.column_ids);
    CHECK(all.matrix == ds.matrix);

    // explicit list keeps schema order regardless of listing order
    const auto explicit_ds =
        apply_feature_policy(ds, FeaturePolicy::parse("F23,F2,F5"));
    REQUIRE(explicit_ds.dim() == 3);
    CHECK(explicit_ds.column_ids[0].number == 2);
    CHECK(explicit_ds.column_ids[1].number == 5);
    CHECK(explicit_ds.column_ids[2].number == 23);

    CHECK_THROWS_AS(
        apply_feature_policy(dropped, FeaturePolicy::explicit_list({{12}})),
        ConfigError);

    // idempotence
    const auto twice = apply_feature_policy(dropped, FeaturePolicy::drop_content());
    CHECK(twice.column_ids == dropped.column_ids);
    CHECK(twice.matrix == dropped.matrix);

    // commutes with row subsetting
    const std::vector<std::uint32_t> rows = {1};
    const auto policy_then_rows = row_subset(dropped, rows);
    const auto rows_then_policy =
        apply_feature_policy(row_subset(ds, rows), FeaturePolicy::drop_content());
    CHECK(policy_then_rows.matrix == rows_then_policy.matrix);
    CHECK(policy_then_rows.labels == rows_then_policy.labels);
}

TEST_CASE("standardizer contract") {
    Rng rng(31);
    const std::size_t n = 400;
    EncodedDataset ds;
    ds.origin = Origin::train;
    ds.column_ids = {{1}, {2}, {3}};
    ds.matrix = Matrix(n, 3);
    ds.labels.assign(n, 0);
    ds.categories.assign(n, AttackCategory::normal);
    for (std::size_t r = 0; r < n; ++r) {
        ds.matrix(r, 0) = rng.next_double(-5, 5);
        ds.matrix(r, 1) = 5.0;  // constant column
        ds.matrix(r, 2) = rng.next_normal() * 3.0 + 10.0;
        ds.labels[r] = r % 2;
    }
    const auto std_ = fit_standardizer(ds);
    const auto z = apply_standardizer(std_, ds);

    for (const std::size_t c : {std::size_t{0}, std::size_t{2}}) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += z.matrix(r, c);
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) <= 1e-9);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) ss += z.matrix(r, c) * z.matrix(r, c);
        CHECK(std::sqrt(ss / static_cast<double>(n - 1)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // constant column maps to zeros
    for (std::size_t r = 0; r < n; ++r) CHECK(z.matrix(r, 1) == 0.0);

    // test data is transformed with training statistics
    EncodedDataset test = ds;
    test.origin = Origin::test;
    for (std::size_t r = 0; r < n; ++r) test.matrix(r, 0) += 100.0;
    const auto z_test = apply_standardizer(std_, test);
    double test_mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) test_mean += z_test.matrix(r, 0);
    test_mean /= static_cast<double>(n);
    CHECK(test_mean > 10.0);  // shifted, not re-centred

    CHECK_THROWS_AS(fit_standardizer(test), ConfigError);  // not training origin
    EncodedDataset other = ds;
    other.column_ids = {{1}, {2}, {4}};
    CHECK_THROWS_AS(apply_standardizer(std_, other), ConfigError);
}

TEST_CASE("stratified split proportions and determinism") {
    Rng rng(17);
    EncodedDataset ds;
    ds.origin = Origin::train;
    ds.column_ids = {{1}};
    ds.matrix = Matrix(100, 1);
    ds.labels.assign(100, 0);
    ds.categories.assign(100, AttackCategory::normal);
    for (std::size_t r = 0; r < 100; ++r) {
        ds.matrix(r, 0) = static_cast<double>(r);
        ds.labels[r] = r < 60 ? 0 : 1;  // 60 normal / 40 attack
        ds.categories[r] = r < 60 ? AttackCategory::normal : AttackCategory::dos;
    }
    const auto [a, b] = stratified_split(ds, 0.7, 5);
    std::size_t a_normal = 0, a_attack = 0;
    for (std::size_t r = 0; r < a.n(); ++r) (a.labels[r] ? a_attack : a_normal)++;
    CHECK(std::abs(static_cast<int>(a_normal) - 42) <= 1);
    CHECK(std::abs(static_cast<int>(a_attack) - 28) <= 1);
    CHECK(a.n() + b.n() == 100);

    const auto [a2, b2] = stratified_split(ds, 0.7, 5);
    CHECK(a.matrix == a2.matrix);
    CHECK(b.matrix == b2.matrix);
    const auto [a3, b3] = stratified_split(ds, 0.7, 6);
    CHECK(a.matrix != a3.matrix);

    CHECK_THROWS_AS(stratified_split(ds, 1.0, 5), ConfigError);
    CHECK_THROWS_AS(stratified_split(ds, 0.0, 5), ConfigError);

    EncodedDataset tiny = row_subset(ds, {0, 1, 2, 60});
    CHECK_THROWS_AS(stratified_split(tiny, 0.5, 5), ConfigError);  // attack class has 1 row
}

TEST_CASE("round-trip: encoded row count equals non-empty line count") {
    std::string text;
    std::size_t lines = 0;
    for (int i = 0; i < 25; ++i) {
        text += make_line("tcp", "http", "SF", i % 3 ? "normal" : "smurf",
                          i % 2 ? "15" : "") + "\n";
        ++lines;
        if (i % 7 == 0) text += "\n";  // blank lines are skipped
    }
    const auto records = parse_text(text);
    const auto ds = encode(records, CategoryVocabulary::build(records), Origin::train);
    CHECK(ds.n() == lines);
}

TEST_CASE("dataset container round trip") {
    const auto train = parse_text(make_line("udp", "http", "SF", "normal") + "\n" +
                                  make_line("tcp", "smtp", "S0", "neptune") + "\n");
    const auto ds = encode(train, CategoryVocabulary::build(train), Origin::train);
    const std::string path = (std::filesystem::temp_directory_path() / "ids_ds_test.idsd").string();
    save_dataset(ds, path);
    const auto loaded = load_dataset(path);
    CHECK(loaded.matrix == ds.matrix);
    CHECK(loaded.column_ids == ds.column_ids);
    CHECK(loaded.labels == ds.labels);
    CHECK(loaded.categories == ds.categories);
    CHECK(loaded.origin == ds.origin);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_dataset(path), ParseError);
}

TEST_CASE("feature id parsing") {
    CHECK(parse_feature_id("F27").number == 27);
    CHECK(parse_feature_id("f3").number == 3);
    CHECK(parse_feature_id("41").number == 41);
    CHECK_THROWS_AS(parse_feature_id("F42"), ConfigError);
    CHECK_THROWS_AS(parse_feature_id("F0"), ConfigError);
    CHECK_THROWS_AS(parse_feature_id("duration"), ConfigError);
}

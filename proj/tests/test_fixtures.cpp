#include "fdw/error.hpp"
#include "fdw/fixtures.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

using namespace fdw;

TEST_CASE("embedded tables load with the documented shapes") {
    const auto t = load_tables();
    CHECK(t.table2.size() == 68);
    CHECK(t.table3.size() == 12);
    CHECK(t.table4.size() == 12);
    CHECK(t.table5.pipelines.size() == 68);
    CHECK(t.table5.classifiers.size() == 12);
    std::set<std::string> names;
    for (const auto& r : t.table2) names.insert(r.pipeline);
    CHECK(names.size() == 68);
    for (const auto& p : t.table5.pipelines) CHECK(names.count(p));
}

TEST_CASE("published values") {
    const auto t = load_tables();
    const auto tok = std::find_if(t.table2.begin(), t.table2.end(), [](const Table2Row& r) { return r.pipeline == "TOK"; });
    REQUIRE(tok != t.table2.end());
    CHECK(tok->unique == 25106);
    CHECK(tok->total == 308393);
    CHECK(tok->fd == doctest::Approx(0.0814));
    CHECK(*t.table5.at("TOK", "sgd_svm") == doctest::Approx(0.796));
    const auto knn = std::find_if(t.table3.begin(), t.table3.end(), [](const Table3Row& r) { return r.classifier == "knn"; });
    REQUIRE(knn != t.table3.end());
    CHECK(knn->best_f1 == doctest::Approx(0.6711));
    CHECK(knn->best_pipeline == "TOKPOSSSTOPALPHA");
    CHECK(knn->rho == doctest::Approx(-0.7116));
    CHECK_FALSE(t.table5.at("NOPE", "knn").has_value());
}

TEST_CASE("column maxima agree with the best-F1 table") {
    const auto t = load_tables();
    for (const auto& row : t.table3) {
        const auto c = t.table5.classifier_index(row.classifier);
        double best = 0;
        for (const auto& r : t.table5.f1) best = std::max(best, r[c]);
        CAPTURE(row.classifier);
        CHECK(std::abs(best - row.best_f1) <= 1e-3);
    }
}

TEST_CASE("FD arithmetic holds for all but the one inconsistent published row") {
    const auto t = load_tables();
    std::vector<std::string> off;
    for (const auto& r : t.table2) {
        if (std::abs(static_cast<double>(r.unique) / static_cast<double>(r.total) - r.fd) >= 5e-5) off.push_back(r.pipeline);
    }
    CHECK(off == std::vector<std::string>{"TOKNERRSTOPALPHA"});
}

TEST_CASE("replication checks report four results") {
    const auto checks = replication_checks(load_tables());
    REQUIRE(checks.size() == 4);
    CHECK_FALSE(checks[0].pass);  // the published row above
    CHECK(checks[0].detail.find("TOKNERRSTOPALPHA") != std::string::npos);
    CHECK(checks[1].pass);
    CHECK(checks[2].pass);
    CHECK(checks[3].pass);
    CHECK(checks[3].detail.find("POSS") != std::string::npos);
}

TEST_CASE("directory loader verifies checksums") {
    const std::filesystem::path src = FDW_FIXTURE_DIR;
    const auto t = load_tables(src);
    CHECK(t.table2.size() == 68);

    test::TempDir dir;
    for (const auto& e : std::filesystem::directory_iterator(src)) std::filesystem::copy(e.path(), dir.path() / e.path().filename());
    {
        std::ofstream out(dir / "table4.csv", std::ios::app);
        out << "\n";
    }
    CHECK_THROWS_WITH_AS(load_tables(dir.path()), doctest::Contains("checksum"), DataError);
    CHECK_THROWS_AS(load_tables(dir / "missing"), DataError);
}

#include "fdw/density.hpp"
#include "fdw/error.hpp"
#include "fdw/fixtures.hpp"
#include "fdw/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace fdw;

namespace {

Corpus plain(std::vector<std::string> texts) {
    std::vector<LabeledText> lt;
    for (std::size_t i = 0; i < texts.size(); ++i) lt.push_back({std::to_string(i), texts[i], static_cast<int>(i % 2)});
    return annotate_plain(lt);
}

const PipelineSpec kTok = pipeline_from_name("TOK");

}  // namespace

TEST_CASE("feature_density from counts") {
    CHECK(std::round(feature_density(25106, 308393) * 1e4) / 1e4 == doctest::Approx(0.0814));
    CHECK(std::round(feature_density(18, 357616) * 1e4) / 1e4 == doctest::Approx(0.0001));
    CHECK(feature_density(0, 0) == 0.0);
}

TEST_CASE("compute_density: hand counts") {
    auto r = compute_density(kTok, plain({"a a b"}));
    CHECK(r.unique_count == 2);
    CHECK(r.total_count == 3);
    CHECK(r.fd == doctest::Approx(2.0 / 3.0));
    CHECK(compute_density(kTok, plain({"word"})).fd == 1.0);
}

TEST_CASE("compute_density: bounds, permutation and duplication") {
    auto c = make_toy_corpus({.n_docs = 30, .positive_rate = 0.3, .seed = 9});
    auto reversed = c;
    std::reverse(reversed.docs.begin(), reversed.docs.end());
    auto doubled = c;
    doubled.docs.insert(doubled.docs.end(), c.docs.begin(), c.docs.end());
    for (const auto& spec : enumerate_pipelines()) {
        auto r = compute_density(spec, c);
        CHECK(r.fd >= 0.0);
        CHECK(r.fd <= 1.0);
        CHECK((r.fd == 1.0) == (r.unique_count == r.total_count));
        CHECK(compute_density(spec, reversed) == r);
        auto d = compute_density(spec, doubled);
        CHECK(d.unique_count == r.unique_count);
        CHECK(d.total_count == 2 * r.total_count);
        CHECK(d.fd == doctest::Approx(r.fd / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("density_report sorts ascending and handles single specs") {
    auto c = make_toy_corpus({.n_docs = 30, .positive_rate = 0.3, .seed = 9});
    auto all = density_report(c, enumerate_pipelines(), 2);
    REQUIRE(all.size() == 68);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].fd <= all[i].fd);
    auto single = density_report(c, {kTok});
    REQUIRE(single.size() == 1);
    CHECK(single[0].name() == "TOK");
    CHECK(density_report(c, enumerate_pipelines(), 1) == all);
}

TEST_CASE("DEP ranks above TOK when tokens repeat in distinct dependency triples") {
    // Each sentence reuses the same three words but in a different role.
    AnnotatedDoc d;
    d.id = "d";
    const std::vector<std::string> words{"x", "y", "z"};
    for (int s = 0; s < 3; ++s) {
        const int base = d.size();
        for (int i = 0; i < 3; ++i) {
            TokenAnn t;
            t.text = words[static_cast<std::size_t>((i + s) % 3)];
            t.lemma = t.text;
            t.pos = "X";
            t.head = base;  // the sentence-initial token is the root
            t.deprel = i == 0 ? "ROOT" : "dep" + std::to_string(i);
            t.is_alpha = true;
            d.tokens.push_back(t);
        }
    }
    d.layers = {Layer::Lemma, Layer::Pos, Layer::Dep, Layer::Stop, Layer::Alpha};
    auto c = make_corpus({d});
    const auto report = density_report(c, {kTok, pipeline_from_name("DEP")});
    REQUIRE(report.size() == 2);
    CHECK(report[0].name() == "TOK");
    CHECK(report[1].name() == "DEP");
    // Brute force: TOK has 3 distinct of 9; DEP triples are all distinct.
    CHECK(report[0].unique_count == 3);
    std::set<std::string> triples;
    for (const auto& t : d.tokens) triples.insert(t.text + "/" + t.deprel + "/" + d.tokens[static_cast<std::size_t>(t.head)].text);
    CHECK(report[1].unique_count == triples.size());
}

TEST_CASE("band_filter over the published table") {
    const auto records = load_tables().densities();
    REQUIRE(records.size() == 68);
    auto b = band_filter(records, 0.05, 0.15);
    CHECK(b.keep.size() == 38);
    CHECK(b.skip.size() == 30);
    CHECK(band_filter(records, 0.0, 1.0).keep.size() == 68);
    CHECK(band_filter(records, 0.40, 0.60).keep.size() == 11);
}

TEST_CASE("band_filter partitions exactly and keeps order") {
    const auto records = load_tables().densities();
    for (auto [lo, hi] : {std::pair{0.0, 0.0}, {0.1, 0.3}, {0.2, 0.2}, {0.9, 1.0}}) {
        auto b = band_filter(records, lo, hi);
        CHECK(b.keep.size() + b.skip.size() == records.size());
        std::size_t k = 0, s = 0;
        for (const auto& r : records) {
            if (r.fd >= lo && r.fd <= hi) CHECK(b.keep[k++] == r);
            else CHECK(b.skip[s++] == r);
        }
    }
}

TEST_CASE("parse_band") {
    auto b = parse_band("0.05:0.15");
    CHECK(b.lo == 0.05);
    CHECK(b.hi == 0.15);
    CHECK_THROWS_AS(parse_band("0.2:0.1"), ArgumentError);
    CHECK_THROWS_AS(parse_band("0.2"), ArgumentError);
    CHECK_THROWS_AS(parse_band("a:b"), ArgumentError);
    CHECK_THROWS_AS(parse_band("-0.1:0.5"), ArgumentError);
}

TEST_CASE("density csv round trip") {
    auto c = make_toy_corpus({.n_docs = 20, .positive_rate = 0.3, .seed = 1});
    auto report = density_report(c, enumerate_pipelines());
    std::stringstream ss;
    write_density_csv(ss, report);
    CHECK(ss.str().rfind("pipeline,unique,total,fd\n", 0) == 0);
    auto back = read_density_csv(ss);
    REQUIRE(back.size() == report.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].pipeline == report[i].pipeline);
        CHECK(back[i].unique_count == report[i].unique_count);
        CHECK(back[i].total_count == report[i].total_count);
    }
    std::istringstream bad("pipeline,unique,total,fd\nNOPE,1,2,0.5\n");
    CHECK_THROWS(read_density_csv(bad));
}

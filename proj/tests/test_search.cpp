#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "solar3d/baselines.hpp"
#include "solar3d/search.hpp"

using namespace solar3d;
using search::CandidateRecord;
using search::SearchLedger;

namespace {

SimConfig coarse_sim() {
    SimConfig cfg;
    cfg.subcell_target_area = 4.0;
    cfg.step_minutes = 30.0;
    return cfg;
}

struct ConstantProposer : search::Proposer {
    std::string geometry;
    explicit ConstantProposer(std::string g) : geometry(std::move(g)) {}
    search::Proposal propose(const search::ProposerRequest&) override {
        search::Proposal p;
        p.geometry = geometry;
        p.proposer_id = "constant";
        return p;
    }
};

struct ThrowingProposer : search::Proposer {
    int calls = 0;
    search::Proposal propose(const search::ProposerRequest&) override {
        ++calls;
        throw search::SearchError("synthetic failure");
    }
};

std::string temp_path(const char* tag) {
    return std::string("search_test_") + tag + ".jsonl";
}

}  // namespace

TEST_CASE("fnv1a digest matches published vectors") {
    CHECK(search::fnv1a_digest("") == "cbf29ce484222325");
    CHECK(search::fnv1a_digest("a") == "af63dc4c8601ec8c");
    CHECK(search::fnv1a_digest("foobar") == "85944171f73967e8");
}

TEST_CASE("identical seeds give bit-identical ledgers") {
    const SimConfig sim = coarse_sim();
    const GuardConfig guard;
    search::BuiltinProposer p1(42), p2(42);
    const SearchLedger a = search::run_search(p1, 15, sim, guard, 42);
    const SearchLedger b = search::run_search(p2, 15, sim, guard, 42);
    CHECK(a == b);
    REQUIRE(a.records.size() == 15);
    search::BuiltinProposer p3(43);
    const SearchLedger c = search::run_search(p3, 15, sim, guard, 43);
    CHECK(a.records != c.records);
}

TEST_CASE("best-so-far is non-decreasing and best_index points at the max") {
    search::BuiltinProposer p(7);
    const SearchLedger led = search::run_search(p, 25, coarse_sim(), GuardConfig{}, 7);
    double running = 0.0;
    double best = 0.0;
    std::size_t best_i = 0;
    for (const auto& r : led.records) {
        running = std::max(running, r.score_wh);
        if (r.score_wh > best) {
            best = r.score_wh;
            best_i = r.index;
        }
        CHECK(running >= r.score_wh);
    }
    CHECK(led.best_index == best_i);
    CHECK(best > 0.0);
}

TEST_CASE("a constant proposer yields equal scores") {
    ConstantProposer p(serialize_geometry(baselines::gen_flat(10.0)));
    const SearchLedger led = search::run_search(p, 5, coarse_sim(), GuardConfig{}, 1);
    REQUIRE(led.records.size() == 5);
    CHECK(led.best_index == 1);
    for (const auto& r : led.records) {
        CHECK(r.score_wh == led.records[0].score_wh);
        CHECK(r.score_wh > 0.0);
        CHECK(r.violation.empty());
        CHECK(r.digest == led.records[0].digest);
    }
}

TEST_CASE("malformed proposals score zero but the run completes") {
    ConstantProposer p("this is not a mesh");
    const SearchLedger led = search::run_search(p, 5, coarse_sim(), GuardConfig{}, 1);
    REQUIRE(led.records.size() == 5);
    CHECK(led.best_index == 0);
    for (const auto& r : led.records) {
        CHECK(r.score_wh == 0.0);
        CHECK(r.violation.rfind("parse", 0) == 0);
    }
}

TEST_CASE("twenty consecutive proposer failures abort with a partial ledger") {
    ThrowingProposer p;
    const SearchLedger led = search::run_search(p, 100, coarse_sim(), GuardConfig{}, 1);
    CHECK(led.records.size() == 20);
    CHECK(p.calls == 20);
    for (const auto& r : led.records) {
        CHECK(r.score_wh == 0.0);
        CHECK(r.violation.rfind("proposer:", 0) == 0);
        CHECK(r.digest == search::fnv1a_digest(""));
    }
}

TEST_CASE("timestamps come from the injected clock, else zero") {
    ConstantProposer p(serialize_geometry(baselines::gen_flat(10.0)));
    const SearchLedger plain = search::run_search(p, 2, coarse_sim(), GuardConfig{}, 1);
    for (const auto& r : plain.records) CHECK(r.ts == 0.0);
    double fake_now = 1000.0;
    const SearchLedger timed = search::run_search(p, 2, coarse_sim(), GuardConfig{}, 1,
                                                  [&] { return fake_now += 1.0; });
    REQUIRE(timed.records.size() == 2);
    CHECK(timed.records[0].ts == 1001.0);
    CHECK(timed.records[1].ts == 1002.0);
}

TEST_CASE("ledger save/load round trip") {
    search::BuiltinProposer p(99);
    const SearchLedger led = search::run_search(p, 10, coarse_sim(), GuardConfig{}, 99);
    const std::string path = temp_path("roundtrip");
    search::save_ledger(led, path);
    const SearchLedger back = search::load_ledger(path);
    CHECK(back == led);
    std::remove(path.c_str());
}

TEST_CASE("corrupt ledger lines are reported with their line number") {
    const std::string path = temp_path("corrupt");
    {
        std::ofstream out(path);
        out << R"({"type":"run","config_digest":"x","seed":1,"best":1})" << '\n';
        out << R"({"i":1,"score_wh":1.0,"digest":"d","parent":0,"violation":"","ts":0.0})" << '\n';
        out << "{{{ not json\n";
    }
    CHECK_THROWS_WITH(search::load_ledger(path), Catch::Matchers::ContainsSubstring("line 3"));
    std::remove(path.c_str());
}

TEST_CASE("ledger lines missing fields are rejected") {
    const std::string path = temp_path("missing");
    {
        std::ofstream out(path);
        out << R"({"type":"run","config_digest":"x","seed":1,"best":1})" << '\n';
        out << R"({"i":1,"score_wh":1.0})" << '\n';
    }
    CHECK_THROWS_WITH(search::load_ledger(path), Catch::Matchers::ContainsSubstring("line 2"));
    std::remove(path.c_str());
}

TEST_CASE("non-increasing candidate indices are rejected") {
    const std::string path = temp_path("order");
    {
        std::ofstream out(path);
        out << R"({"i":2,"score_wh":1.0,"digest":"d","parent":0,"violation":"","ts":0.0})" << '\n';
        out << R"({"i":2,"score_wh":2.0,"digest":"d","parent":0,"violation":"","ts":0.0})" << '\n';
    }
    CHECK_THROWS_AS(search::load_ledger(path), search::SearchError);
    std::remove(path.c_str());
}

TEST_CASE("missing ledger file raises a search error") {
    CHECK_THROWS_AS(search::load_ledger("definitely_not_here.jsonl"), search::SearchError);
}

TEST_CASE("external proposer speaks line-delimited JSON") {
    std::string flat = serialize_geometry(baselines::gen_flat(8.0));
    for (char& c : flat) {
        if (c == '\n') c = ' ';  // keep the embedded JSON single-line
    }
    // The child ignores the request payload and always answers with a panel.
    const std::string cmd = "while read line; do printf '{\"geometry\": \"" + flat +
                            "\"}\\n'; done";
    search::ExternalProposer p(cmd, 10.0);
    const SearchLedger led = search::run_search(p, 3, coarse_sim(), GuardConfig{}, 5);
    REQUIRE(led.records.size() == 3);
    for (const auto& r : led.records) {
        CHECK(r.score_wh > 0.0);
        CHECK(r.digest == search::fnv1a_digest(flat));
    }
}

TEST_CASE("external proposer timeout is a per-candidate failure") {
    search::ExternalProposer p("sleep 30", 0.2);
    const SearchLedger led = search::run_search(p, 1, coarse_sim(), GuardConfig{}, 5);
    REQUIRE(led.records.size() == 1);
    CHECK(led.records[0].score_wh == 0.0);
    CHECK(led.records[0].violation.rfind("proposer:", 0) == 0);
}

TEST_CASE("external proposer garbage output is a per-candidate failure") {
    search::ExternalProposer p("while read line; do echo 'not json'; done", 10.0);
    const SearchLedger led = search::run_search(p, 2, coarse_sim(), GuardConfig{}, 5);
    REQUIRE(led.records.size() == 2);
    for (const auto& r : led.records) {
        CHECK(r.score_wh == 0.0);
        CHECK(r.violation.rfind("proposer:", 0) == 0);
    }
}

TEST_CASE("budget below one is rejected") {
    ConstantProposer p("x");
    CHECK_THROWS_AS(search::run_search(p, 0, coarse_sim(), GuardConfig{}, 1),
                    search::SearchError);
}

#include "doctest.h"

#include "kserver/json_io.hpp"

using namespace kserver;

namespace {

const std::string kDataDir = KSERVER_DATA_DIR;

} // namespace

TEST_CASE("metric descriptors") {
    SUBCASE("cycle") {
        MetricDescriptor d = metric_from_json(json{{"type", "cycle"}, {"n", 8}});
        CHECK(d.type == "cycle");
        CHECK(d.metric->n() == 8);
        CHECK(d.metric->diameter() == 4);
    }
    SUBCASE("hypercube") {
        MetricDescriptor d = metric_from_json(json{{"type", "hypercube"}, {"dim", 3}});
        CHECK(d.metric->n() == 8);
        CHECK(d.metric->diameter() == 3);
    }
    SUBCASE("matrix") {
        MetricDescriptor d = metric_from_json(
            json{{"type", "matrix"}, {"matrix", {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}}});
        CHECK(d.metric->n() == 3);
        CHECK(!d.metric->has_antipodes());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(metric_from_json(json{{"type", "moebius"}}), std::invalid_argument);
        CHECK_THROWS_AS(metric_from_json(json{{"type", "cycle"}}), std::invalid_argument);
        CHECK_THROWS_AS(metric_from_json(json::array()), std::invalid_argument);
        CHECK_THROWS_AS(metric_from_json(json{{"type", "cycle"}, {"n", 7}}), std::invalid_argument);
    }
}

TEST_CASE("instance files") {
    json j{{"metric", {{"type", "cycle"}, {"n", 8}}},
           {"k", 3},
           {"X0", {4, 0, 2}},
           {"requests", {1, 5}}};
    ParsedInstance p = instance_from_json(j);
    CHECK(p.instance.k == 3);
    CHECK(p.instance.x0 == Config(std::vector<int>{0, 2, 4}));
    CHECK(p.instance.requests == std::vector<int>{1, 5});
    CHECK(p.metric.type == "cycle");

    SUBCASE("missing field") {
        j.erase("X0");
        CHECK_THROWS_WITH_AS(instance_from_json(j), doctest::Contains("X0"), std::invalid_argument);
    }
    SUBCASE("request out of range") {
        j["requests"] = {8};
        CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
    }
    SUBCASE("bundled demo instance parses") {
        ParsedInstance demo = instance_from_json(load_json_file(kDataDir + "/demo_cycle8.json"));
        CHECK(demo.instance.requests.size() == 12);
    }
}

TEST_CASE("support files match the built-in test case") {
    ParsedSupport ps = support_from_json(load_json_file(kDataDir + "/testcase_a.json"));
    CHECK(ps.name == "a");
    CHECK(ps.support.r == 4);
    TestCase builtin = builtin_testcases()[0];
    WorkFunction from_file = from_support(ps.support);
    WorkFunction from_builtin = from_support(builtin.support);
    CHECK(from_file.values() == from_builtin.values());

    SUBCASE("support set without r is rejected") {
        json j = load_json_file(kDataDir + "/testcase_a.json");
        j["supports"].push_back(json{{"S", {0, 1, 2}}, {"v", 5}});
        CHECK_THROWS_AS(support_from_json(j), std::invalid_argument);
    }
}

TEST_CASE("work-function export preserves enumeration order") {
    auto sp = make_space(std::make_shared<const FiniteMetric>(FiniteMetric::cycle(6)), 2);
    WorkFunction wf = initial_wf(sp, Config(std::vector<int>{0, 3}));
    json j = wf_values_json(wf);
    REQUIRE(j.is_array());
    REQUIRE(static_cast<int>(j.size()) == sp->size());
    for (int i = 0; i < sp->size(); ++i) CHECK(j[static_cast<size_t>(i)].get<int>() == wf.value(i));
}

TEST_CASE("trace serialization") {
    ParsedInstance demo = instance_from_json(load_json_file(kDataDir + "/demo_cycle8.json"));
    Trace tr = simulate(demo.instance);
    json j = trace_to_json(tr, demo.raw);
    CHECK(j["alg"].get<long long>() == tr.alg);
    CHECK(j["opt"].get<long long>() == tr.opt);
    CHECK(j["steps"].size() == tr.steps.size());
    CHECK(j["steps"][0].contains("phi"));

    std::string csv = trace_to_csv(tr);
    CHECK(csv.rfind("t,request,cost,extcost,alg,phi\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(tr.steps.size()) + 1);
}

TEST_CASE("sweep report serialization") {
    auto cases = builtin_testcases();
    SweepReport rep = sweep(cases, 5170, 5200, 2);
    json j = sweep_report_to_json(rep);
    CHECK(j["total"].get<int>() == 30);
    CHECK(j["testcases"].size() == 3);
    REQUIRE(j["survivors"].contains("a"));
    REQUIRE(j["survivors"].contains("ab"));
    REQUIRE(j["survivors"].contains("abc"));
    CHECK(j["survivors"]["abc"].empty());
    // 0x143a = 5178 lies in this range and survives (a) and (b)
    bool found = false;
    for (const auto& h : j["survivors"]["ab"]) found |= h.get<std::string>() == "143a";
    CHECK(found);
    CHECK(j["rows"].size() == 30);
    CHECK(j["orbits"]["ab"][0].get<std::string>() == "0c8e");
}

TEST_CASE("mask hex rendering") {
    CHECK(mask_hex(0) == "0000");
    CHECK(mask_hex(0x143A) == "143a");
    CHECK(mask_hex(0x7FFF) == "7fff");
}

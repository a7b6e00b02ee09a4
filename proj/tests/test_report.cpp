#include <doctest.h>

#include "heteroswitch/report.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

TEST_CASE("reports round-trip through JSON") {
  for (const char* stem : testing::kFixtureStems) {
    CAPTURE(stem);
    const auto r = network_report(fixture(stem));
    const Json j = to_json(r);
    const auto back = report_from_json(Json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.headline == r.headline);
    CHECK(back.node_verdicts.size() == r.node_verdicts.size());
  }
}

TEST_CASE("verdicts round-trip through JSON") {
  const auto v = followable(fixture("rsp"), {"RR", "PR", "PS", "SS"});
  const auto back = verdict_from_json(Json::parse(to_json(v).dump()));
  CHECK(back.intersects_near_origin == v.intersects_near_origin);
  REQUIRE(back.certificate);
  CHECK(back.certificate->row_multipliers == v.certificate->row_multipliers);
  const auto w = followable(fixture("rsp"), {"RR", "PR", "PS"});
  const auto wb = verdict_from_json(to_json(w));
  REQUIRE(wb.witness);
  CHECK(wb.witness->direction == w.witness->direction);
}

TEST_CASE("schema mismatch throws") {
  CHECK_THROWS((void)report_from_json(Json::parse(R"({"network": 3})")));
}

TEST_CASE("text rendering names the headline and every node") {
  const auto net = fixture("bowtie");
  const auto text = render_text(network_report(net));
  CHECK(text.find("no infinite switching") != std::string::npos);
  for (const auto& n : net.nodes) CHECK(text.find(n.id) != std::string::npos);
}

TEST_CASE("path listing") {
  const auto pv = enumerate_followable(fixture("r6_simplex"), "xi1", 3);
  const auto j = to_json(pv);
  CHECK(j.size() == pv.size());
  CHECK(render_text(pv).find("xi1->xi2->xi5->xi6") != std::string::npos);
  CHECK(join_path({"a", "b"}) == "a->b");
}

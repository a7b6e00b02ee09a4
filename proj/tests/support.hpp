#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heteroswitch/network.hpp"

namespace testing {

inline std::filesystem::path fixtures() { return HETEROSWITCH_TEST_FIXTURES; }

inline heteroswitch::HeteroclinicNetwork fixture(const std::string& stem) {
  return heteroswitch::load_network_file(fixtures() / (stem + ".json"));
}

inline const char* const kFixtureStems[] = {"kirk_silber", "bowtie", "house", "rsp",
                                            "rspls",       "r6_simplex", "ac_network"};

/// Node k sits on coordinate axis k+1. An edge f->t expands along x_{t+1} at f
/// and contracts along x_{f+1} at t; every other direction is transverse.
inline nlohmann::json axis_network_document(const std::vector<std::string>& ids,
                                            const std::vector<std::pair<int, int>>& edges) {
  const int n = static_cast<int>(ids.size());
  auto label = [](int k) { return "x" + std::to_string(k + 1); };
  nlohmann::json doc;
  doc["ambient_dimension"] = n;
  doc["nodes"] = nlohmann::json::array();
  for (int v = 0; v < n; ++v) {
    nlohmann::json node{{"id", ids[static_cast<std::size_t>(v)]}, {"eigenvalues", nlohmann::json::array()}};
    for (int l = 0; l < n; ++l) {
      std::string klass = "transverse";
      double value = -0.5 - 0.1 * l;
      if (l == v) klass = "radial", value = -1.0;
      for (auto [f, t] : edges) {
        if (f == v && t == l) klass = "expanding", value = 1.0 + 0.05 * l;
        if (t == v && f == l) klass = "contracting", value = -1.0 - 0.07 * l;
      }
      node["eigenvalues"].push_back({{"value", value}, {"klass", klass}, {"label", label(l)}});
    }
    doc["nodes"].push_back(node);
  }
  doc["connections"] = nlohmann::json::array();
  for (auto [f, t] : edges)
    doc["connections"].push_back({{"from", ids[static_cast<std::size_t>(f)]},
                                  {"to", ids[static_cast<std::size_t>(t)]},
                                  {"expanding_label", label(t)},
                                  {"contracting_label", label(f)}});
  return doc;
}

inline heteroswitch::HeteroclinicNetwork axis_network(const std::vector<std::string>& ids,
                                                      const std::vector<std::pair<int, int>>& edges) {
  return heteroswitch::load_network(axis_network_document(ids, edges).dump());
}

}  // namespace testing

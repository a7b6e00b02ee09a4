// One line per acceptance criterion; exit status 0 iff all pass.
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "heteroswitch/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace heteroswitch::acceptance;
  Options o;
  o.fixtures = HETEROSWITCH_TEST_FIXTURES;
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  bool ok = true;
  for (const auto& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const auto r = run(o, {c.id}).front();
    std::cout << format(r) << std::endl;
    ok = ok && r.passed;
  }
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}

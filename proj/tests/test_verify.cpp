#include <set>

#include "support.hpp"
#include "telesim/verify.hpp"

using namespace telesim;

TEST_CASE("the quick verification sweep passes cleanly") {
  VerifyOptions opt;
  opt.quick = true;
  const auto results = run_verification(opt);
  CHECK(all_passed(results));
  REQUIRE(results.size() >= 20);

  std::set<std::string> names;
  for (const auto& r : results) {
    INFO(r.name << ": measured " << r.measured << " vs tolerance " << r.tolerance);
    CHECK(r.pass);
    CHECK(names.insert(r.name).second); // no duplicate check names
    CHECK(!r.name.empty());
  }

  // one check per module family must be present
  for (const char* prefix : {"qmat.", "lindblad.", "environment.", "teleport.", "twopath.",
                             "closedform.", "analysis."}) {
    const bool found = std::any_of(results.begin(), results.end(), [&](const CheckResult& r) {
      return r.name.rfind(prefix, 0) == 0;
    });
    INFO("missing family " << prefix);
    CHECK(found);
  }
}

TEST_CASE("an injected fault is caught by the cross check") {
  VerifyOptions opt;
  opt.quick = true;
  opt.inject_fault = true;
  const auto results = run_verification(opt);
  CHECK_FALSE(all_passed(results));

  const auto hit = std::find_if(results.begin(), results.end(), [](const CheckResult& r) {
    return r.name == "twopath.agreement";
  });
  REQUIRE(hit != results.end());
  CHECK_FALSE(hit->pass);
  CHECK(hit->measured > hit->tolerance);
}

#include "doctest.h"
#include "support/gradcheck_cases.hpp"

using namespace gradcheck;

// Every differentiable operation, against central differences in double
// precision (step 1e-4, rtol 1e-3), on randomized small shapes.
TEST_CASE("gradient checks on randomized shapes") {
  for (const auto& c : all_cases()) {
    CAPTURE(c.name);
    for (uint64_t seed = 1; seed <= 5; seed++) {
      const Report rep = c.run(seed);
      CHECK(rep.checked > 0);
      CHECK_MESSAGE(rep.ok(), c.name << " seed " << seed << ": " << rep.failed << "/"
                                     << rep.checked << " failed, worst " << rep.worst_rel
                                     << " at " << rep.worst_where);
    }
  }
}

#include "doctest.h"

TEST_CASE("placeholder test_dynamics") { CHECK(true); }

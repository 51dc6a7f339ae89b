#include "doctest.h"

TEST_CASE("placeholder test_agent") { CHECK(true); }

#include "doctest.h"

TEST_CASE("placeholder test_analysis") { CHECK(true); }

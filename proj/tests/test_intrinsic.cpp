#include "doctest.h"

TEST_CASE("placeholder test_intrinsic") { CHECK(true); }

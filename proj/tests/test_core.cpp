#include <cmath>
#include <set>

#include "doctest.h"
#include "ride/core/rng.hpp"
#include "ride/core/tensor.hpp"

using namespace ride;

TEST_CASE("rng streams are deterministic per seed") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; i++) {
    const uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  bool any_diff = false;
  for (int i = 0; i < 10; i++) any_diff |= (a.next_u64() != c.next_u64());
  CHECK(any_diff);
}

TEST_CASE("below() stays in range and hits every value") {
  Rng rng(7);
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; i++) {
    const uint64_t v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("between() is half-open") {
  Rng rng(9);
  for (int i = 0; i < 500; i++) {
    const int v = rng.between(3, 6);
    CHECK(v >= 3);
    CHECK(v < 6);
  }
}

TEST_CASE("normal() roughly standard") {
  Rng rng(11);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; i++) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("split() decorrelates streams") {
  Rng root(5);
  Rng a = root.split(1);
  Rng b = root.split(2);
  CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("tensor shape bookkeeping") {
  TensorT<float> t({2, 3, 4});
  CHECK(t.size() == 24);
  CHECK(t.dim(0) == 2);
  CHECK(t.dim(2) == 4);
  t.fill(1.5f);
  CHECK(t.data[23] == 1.5f);
  t.zero();
  CHECK(t.data[0] == 0.f);
}

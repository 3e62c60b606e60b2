/*
Copyright 2026 The poiwave Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "poiwave/rng.hpp"

using poiwave::CounterRng;
using poiwave::Philox4x32;
using poiwave::StreamPurpose;

TEST_CASE("philox known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and separated") {
  CounterRng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) REQUIRE(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint32_t rep = 0; rep < 50; ++rep)
    for (auto p : {StreamPurpose::Sample, StreamPurpose::Noise, StreamPurpose::Design})
      firsts.insert(CounterRng(42, rep, p)());
  CHECK(firsts.size() == 150);
  CHECK(CounterRng(1)() != CounterRng(2)());
}

TEST_CASE("uniforms lie in the open unit interval with the right mean") {
  CounterRng r(7);
  double sum = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / N - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / N));
}

TEST_CASE("normal variates have unit variance") {
  CounterRng r(8, 0, StreamPurpose::Noise);
  double s = 0.0, s2 = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / N) < 4.0 / std::sqrt(N));
  CHECK(std::abs(s2 / N - 1.0) < 4.0 * std::sqrt(2.0 / N));
}

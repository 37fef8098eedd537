#include <doctest.h>

#include <algorithm>

#include "zerofolio/serialize.hpp"
#include "zerofolio/text.hpp"

using namespace zerofolio;

namespace {

std::vector<std::string> digits() {
  std::vector<std::string> v;
  for (int i = 0; i < 10; ++i) v.push_back(std::to_string(i));
  return v;
}

std::vector<std::string> as_strings(const std::vector<int>& xs) {
  std::vector<std::string> v;
  for (int x : xs) v.push_back(std::to_string(x));
  return v;
}

std::string random_file(SplitMix64& rng, std::size_t lines) {
  std::string s;
  for (std::size_t i = 0; i < lines; ++i) {
    s += std::to_string(rng.below(100000)) + " " + std::to_string(rng.below(1000)) + " 0\n";
  }
  return s;
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
  CHECK(SplitMix64::mix(1234567) == 6457827717110365317ULL);
}

TEST_CASE("shuffle_lines golden permutations") {
  CHECK(shuffle_lines({}, 9).empty());
  CHECK(shuffle_lines({"a"}, 9) == std::vector<std::string>{"a"});
  CHECK(shuffle_lines({"a", "b", "c"}, 42) == std::vector<std::string>{"a", "c", "b"});
  CHECK(shuffle_lines(digits(), 7) == as_strings({8, 1, 5, 9, 0, 4, 3, 2, 6, 7}));
  CHECK(shuffle_lines(digits(), 8) == as_strings({5, 7, 0, 3, 6, 4, 8, 1, 9, 2}));
}

TEST_CASE("serialize_instance examples") {
  SerializationConfig plain{1000, 0, false};
  CHECK(serialize_instance({"p cnf 2 2\n1 2 0\n-1 0"}, plain) == "p cnf 2 2\n1 2 0\n-1 0");
  CHECK(serialize_instance({"A", "B"}, plain) == "A\nB");
  CHECK(serialize_instance({"A\n", "B\r\n"}, plain) == "A\nB");

  SerializationConfig cfg;  // budget 10000, shuffle on
  const std::string big(20001, 'x');
  CHECK(serialize_instance({big}, cfg).size() == 10000);
}

TEST_CASE("truncation counts scalar values and repairs invalid bytes") {
  SerializationConfig cfg{3, 0, false};
  CHECK(serialize_instance({"\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9"}, cfg) == "\xC3\xA9\xC3\xA9\xC3\xA9");
  SerializationConfig wide{100, 0, false};
  CHECK(serialize_instance({"a\xFF" "b"}, wide) == "a\xEF\xBF\xBD" "b");
  CHECK(text::count_scalars(serialize_instance({std::string(50, '\x80')}, SerializationConfig{20, 1, true})) == 20);
}

TEST_CASE("serialization properties over random files") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string file = random_file(rng, 1 + rng.below(200));
    SerializationConfig cfg{1 + rng.below(3000), rng.next(), rng.below(2) == 0};
    const auto out = serialize_instance({file}, cfg);
    CHECK(text::count_scalars(out) <= cfg.budget_chars);
    CHECK(out == serialize_instance({file}, cfg));
    if (!cfg.shuffle) {
      std::string joined = file.substr(0, file.size() - 1);  // drop trailing newline
      CHECK(joined.compare(0, out.size(), out) == 0);
    }
    auto lines = instance_lines({file});
    auto shuffled = shuffle_lines(lines, cfg.seed);
    std::sort(lines.begin(), lines.end());
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(lines == shuffled);
  }
}

TEST_CASE("different seeds give different serializations") {
  SplitMix64 rng(5);
  const std::string file = random_file(rng, 1000);
  for (std::uint64_t s = 0; s < 20; ++s) {
    CHECK(serialize_instance({file}, {10000, s, true}) != serialize_instance({file}, {10000, s + 1, true}));
  }
}

TEST_CASE("empty file list is rejected") {
  CHECK_THROWS(serialize_instance({}, SerializationConfig{}));
}

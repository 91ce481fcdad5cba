#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "corpus.hpp"
#include "ptsym/json_io.hpp"

using namespace ptsym;
using nlohmann::ordered_json;

TEST_CASE("matrix json round-trip preserves every bit") {
  std::mt19937_64 rng(59);
  const auto m = corpus::random_complex(4, rng);
  const auto text = dump_g17(matrix_to_json(m));
  const auto back = matrix_from_json(nlohmann::json::parse(text));
  REQUIRE(back.dim() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("dump_g17 is deterministic and fixed-format") {
  ordered_json j;
  j["a"] = 1.0 / 3.0;
  j["b"] = {1.5, -2.25};
  j["c"] = "text with \"quotes\"";
  j["d"] = true;
  j["n"] = 42;
  const auto s1 = dump_g17(j);
  const auto s2 = dump_g17(j);
  CHECK(s1 == s2);
  CHECK(s1.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("digest is stable") {
  CHECK(digest_hex("") == "fnv1a:cbf29ce484222325");
  CHECK(digest_hex("ptsym") != digest_hex("ptsyn"));
}

TEST_CASE("matrix files: csv variant and validation errors") {
  const char* path = "report_test_matrix.csv";
  {
    std::ofstream f(path);
    f << "# 2x2 in row-major re,im pairs\n";
    f << "1,1\n2,0\n2,0\n1,-1\n";
  }
  const auto m = read_matrix_file(path);
  REQUIRE(m.dim() == 2);
  CHECK(m(0, 0) == Complex(1, 1));
  CHECK(m(1, 1) == Complex(1, -1));
  std::remove(path);

  nlohmann::json bad;
  bad["n"] = 2;
  bad["entries"] = {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};  // 3 != 4
  CHECK_THROWS_AS(matrix_from_json(bad), ValidationError);
  CHECK_THROWS_AS(read_matrix_file("no_such_file.json"), ValidationError);
}

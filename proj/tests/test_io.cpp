#include <doctest.h>

#include <sstream>

#include "gsp/io.hpp"

using namespace gsp;

TEST_CASE("edge list round trip") {
  const auto g = build_circulant(10, {1, 3});
  std::stringstream s;
  write_edge_list(s, *g);
  const auto back = read_edge_list(s);
  CHECK(back->order() == 10);
  CHECK(back->edges() == g->edges());
}

TEST_CASE("malformed edge list names the line") {
  std::istringstream in("n=4\n0 1\n# comment\n1 x\n");
  try {
    read_edge_list(in, "g.txt");
    FAIL("expected a parse error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("g.txt:4") != std::string::npos);
  }
  std::istringstream no_header("0 1\n");
  CHECK_THROWS_AS(read_edge_list(no_header), validation_error);
  std::istringstream out_of_range("n=3\n0 3\n");
  CHECK_THROWS_AS(read_edge_list(out_of_range), validation_error);
}

TEST_CASE("coordinates round trip exactly") {
  const auto gg = build_random_geometric(20, 4);
  std::stringstream s;
  write_coordinates(s, gg.coords);
  CHECK(read_coordinates(s) == gg.coords);
}

TEST_CASE("signal round trip and header check") {
  Signal x(3);
  x << 0.1, -2.5e-7, 1.0 / 3.0;
  std::stringstream s;
  write_signal(s, x);
  CHECK(s.str().rfind("# n=3\n", 0) == 0);
  CHECK(read_signal(s) == x);

  std::istringstream bad("# n=3\n1\n2\n");
  CHECK_THROWS_AS(read_signal(bad), validation_error);
  std::istringstream junk("1\nabc\n");
  try {
    read_signal(junk, "x.txt");
    FAIL("expected a parse error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("x.txt:2") != std::string::npos);
  }
}

TEST_CASE("key-value config") {
  std::istringstream in("# experiment\ntrials = 20\neps = 0.5, 1.0\nname = abc # trailing\n");
  const auto cfg = KeyValueConfig::parse(in, "c.cfg");
  CHECK(cfg.get_int("trials", 0) == 20);
  CHECK(cfg.get_list("eps", {}) == std::vector<double>{0.5, 1.0});
  CHECK(cfg.get_or("name", "") == "abc");
  CHECK(cfg.get_double("missing", 7.0) == 7.0);
  CHECK_THROWS_AS(cfg.get_double("name", 0.0), validation_error);
  CHECK_NOTHROW(cfg.require_known({"trials", "eps", "name"}));
  CHECK_THROWS_AS(cfg.require_known({"trials"}), validation_error);

  std::istringstream dup("a=1\na=2\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(dup), validation_error);
  std::istringstream noeq("a=1\nbroken\n");
  try {
    KeyValueConfig::parse(noeq, "c.cfg");
    FAIL("expected a parse error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("c.cfg:2") != std::string::npos);
  }
}

#include <doctest.h>

#include "qnl/output.hpp"

#include <sstream>

using namespace qnl;

TEST_CASE("reals round-trip") {
  for (double x : {0.1, 1.0 / 3, -2.5e-17, 12345.678901234567}) CHECK(std::stod(format_real(x)) == x);
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  CsvWriter w(os, {{"scheme", "qce"}, {"split", "0.2"}}, {"x", "n", "name"});
  w.row({0.5, 3LL, std::string("a")});
  CHECK(os.str() == "# scheme=qce\n# split=0.2\nx,n,name\n0.5,3,a\n");
  CHECK_THROWS(w.row({1.0}));
}

#include "verify.hpp"

#include <cstdlib>
#include <iostream>

int main() {
  int failed = 0;
  for (int id = 1; id <= qnl::verify::kCriteria; ++id) {
    qnl::verify::Criterion c = qnl::verify::run_criterion(id);
    std::cout << qnl::verify::format(c) << std::endl;
    failed += !c.pass;
  }
  std::cout << qnl::verify::kCriteria - failed << "/" << qnl::verify::kCriteria << " criteria pass" << std::endl;
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}

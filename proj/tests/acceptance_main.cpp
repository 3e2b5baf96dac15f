// Runs the verification battery and prints one line per criterion.

#include <cstdlib>
#include <iostream>

#include "poacert/suite.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const poacert::SuiteResult result = poacert::run_acceptance(seed, &std::cout);
  std::cout << (result.all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << std::endl;
  return result.all_pass ? 0 : 1;
}

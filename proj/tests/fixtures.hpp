#pragma once

#include <cstdlib>
#include <string>

#include "hopfren/graph.hpp"

namespace hopfren::testing {

inline std::string fixture_dir() {
  const char* env = std::getenv("HOPFREN_FIXTURES");
  return env ? env : "fixtures";
}

inline TheoryPtr fixture(const std::string& name) {
  return std::make_shared<TheorySpec>(
      load_theory_file(fixture_dir() + "/" + name + ".json"));
}

} // namespace hopfren::testing

#include <iostream>

#include "skewlab/error.hpp"
#include "skewlab/sampling.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: export_fixtures <dir>\n";
    return 2;
  }
  try {
    skewlab::export_fixtures(argv[1]);
  } catch (const skewlab::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

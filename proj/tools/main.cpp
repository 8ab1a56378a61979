#include <iostream>

#include "linforget/cli.hpp"

int main(int argc, char** argv) {
  return linforget::run_cli(argc, argv, std::cout, std::cerr);
}

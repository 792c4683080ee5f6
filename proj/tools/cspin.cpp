#include <iostream>

#include "cspin/commands.hpp"

int main(int argc, char** argv) {
    return cspin::run_cli(argc, argv, std::cout, std::cerr);
}

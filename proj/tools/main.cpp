#include <iostream>
#include <vector>

#include "mapcheck/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mapcheck::cli::run(args, std::cout, std::cerr);
}

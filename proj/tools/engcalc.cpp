#include <iostream>
#include <string>
#include <vector>

#include "engcalc/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return engcalc::cli::run(args, std::cout, std::cerr);
}

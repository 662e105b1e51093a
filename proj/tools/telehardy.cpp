#include <iostream>
#include <string>
#include <vector>

#include "telehardy/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return telehardy::cli::run(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "pellab/cli/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pellab::cli::run(args, std::cout, std::cerr);
}

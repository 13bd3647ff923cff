#include <iostream>
#include <string>
#include <vector>

#include "tfs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tfs::cli::run(args, std::cout, std::cerr);
}

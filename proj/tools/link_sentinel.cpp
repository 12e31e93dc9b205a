#include <iostream>
#include <string>
#include <vector>

#include "link_sentinel/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return link_sentinel::cli::run(args, std::cout, std::cerr);
}

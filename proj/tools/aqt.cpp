#include <iostream>
#include <string>
#include <vector>

#include "aqt/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return aqt::run_cli(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "qdspin/cli_app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return qdspin::cli::run_cli(args, std::cout, std::cerr);
}

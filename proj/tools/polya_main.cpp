#include "polya/cli.hpp"

int main(int argc, char** argv) { return polya::cli_main(argc, argv); }

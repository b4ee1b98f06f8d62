#include "stochrank/cli.hpp"

int main(int argc, char** argv) { return stochrank::cli::run_cli(argc, argv); }

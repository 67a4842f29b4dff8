#include "fidsim/cli.hpp"

int main(int argc, char** argv) { return fidsim::cli_main(argc, argv); }

#include "njstab/cli.hpp"

int main(int argc, char** argv) { return njstab::cli_main(argc, argv); }

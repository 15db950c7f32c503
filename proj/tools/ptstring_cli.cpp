#include "ptstring/cli.hpp"

int main(int argc, char** argv) { return ptstring::cli_main(argc, argv); }

#include "bfst/cli.hpp"

int main(int argc, char** argv) { return bfst::run_cli(argc, argv); }

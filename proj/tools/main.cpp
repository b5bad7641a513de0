#include "mctrack/cli.hpp"

int main(int argc, char** argv) { return mctrack::run_cli(argc, argv); }

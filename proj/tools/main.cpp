#include "chainavail/cli.hpp"

int main(int argc, char** argv) { return chainavail::run_cli(argc, argv); }

#include "hamlink/cli.hpp"

int main(int argc, char** argv) { return hamlink::run_cli(argc, argv); }

#include "raregate/cli.hpp"

int main(int argc, char** argv) { return raregate::run_cli(argc, argv); }

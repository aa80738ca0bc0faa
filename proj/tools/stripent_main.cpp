#include "stripent/cli.hpp"

int main(int argc, char** argv) { return stripent::run_cli(argc, argv); }

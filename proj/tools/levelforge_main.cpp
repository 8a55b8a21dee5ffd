#include "levelforge/cli.hpp"

int main(int argc, char** argv) { return levelforge::run_cli(argc, argv); }

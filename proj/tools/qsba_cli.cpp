#include "qsba/harness.hpp"

int main(int argc, char** argv) { return qsba::run_cli(argc, argv); }

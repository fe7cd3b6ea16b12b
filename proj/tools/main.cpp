#include "pxvi/runner.hpp"

int main(int argc, char** argv) { return pxvi::run_cli(argc, argv); }

#include "rootstat/cli_app.hpp"

int main(int argc, char** argv) { return rootstat::run_app(argc, argv); }

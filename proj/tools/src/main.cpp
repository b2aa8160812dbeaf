#include <string>
#include <vector>

#include "osgood/lab/app.hpp"

int main(int argc, char** argv) {
  return osgood::lab::run_cli(std::vector<std::string>(argv, argv + argc));
}

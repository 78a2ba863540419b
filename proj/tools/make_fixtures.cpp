// Writes the synthetic scenario scenes as scene.json + OBJ files.
#include <iostream>

#include "helios/error.hpp"
#include "helios/fixtures.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: helios_fixtures <output-dir>\n";
    return 2;
  }
  try {
    const std::filesystem::path out = argv[1];
    std::cout << helios::fixtures::write(helios::fixtures::wall_bike(), out / "wall_bike").string() << '\n';
    std::cout << helios::fixtures::write(helios::fixtures::house_tree_streetlight(), out / "house").string() << '\n';
  } catch (const helios::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}

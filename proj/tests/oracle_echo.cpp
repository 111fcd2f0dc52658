// Test helper speaking the subprocess oracle protocol: one measure JSON per
// input line, one per output line. Shifts every atom by +1; with --hang it
// never answers (for timeout tests).

#include <iostream>
#include <string>
#include <thread>

#include "transport/json_io.hpp"

int main(int argc, char** argv) {
  bool hang = argc > 1 && std::string(argv[1]) == "--hang";
  std::string line;
  while (std::getline(std::cin, line)) {
    if (hang) {
      std::this_thread::sleep_for(std::chrono::seconds(3600));
    }
    auto mu = transport::measure_from_json(transport::parse_json(line));
    std::vector<transport::Point> atoms;
    for (const auto& x : mu.atoms()) {
      std::vector<double> coords = x.coords;
      for (auto& c : coords) c += 1.0;
      atoms.emplace_back(std::move(coords));
    }
    transport::DiscreteMeasure image(std::move(atoms), mu.weights());
    std::cout << transport::measure_to_json(image).dump() << "\n";
    std::cout.flush();
  }
  return 0;
}

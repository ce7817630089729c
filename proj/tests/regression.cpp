// Regression check for the identities without an asserted residual.
//   regression <baseline.json>          compare against the stored baseline
//   regression <baseline.json> --write  regenerate it

#include <cstring>
#include <iostream>

#include "baseline_cases.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: regression <baseline.json> [--write]\n";
    return 1;
  }
  const std::string path = argv[1];
  const bool write = argc > 2 && std::strcmp(argv[2], "--write") == 0;
  try {
    nlohmann::ordered_json current = nlohmann::ordered_json::array();
    for (const auto& c : baseline::cases()) {
      current.push_back(baseline::record(qbessel::check_identity(c.id, c.params, {}, 1e-8)));
    }
    if (write) {
      std::ofstream(path) << current.dump(2) << '\n';
      std::cout << "wrote " << current.size() << " cases to " << path << '\n';
      return 0;
    }
    const auto stored = baseline::load(path);
    if (stored.size() != current.size()) {
      std::cout << "FAIL case count " << stored.size() << " != " << current.size() << '\n';
      return 1;
    }
    int failed = 0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      const std::string why = baseline::compare(stored[i], current[i], 1e-12);
      std::cout << (why.empty() ? "ok   " : "FAIL ") << current[i]["identity"].get<std::string>() << ' '
                << current[i]["params"].dump() << ' ' << "rel_residual=" << current[i]["rel_residual"].dump()
                << (why.empty() ? "" : " (" + why + ")") << '\n';
      failed += why.empty() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

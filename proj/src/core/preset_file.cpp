#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "dualrail/errors.hpp"
#include "dualrail/presets.hpp"

namespace dualrail {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T required(const pt::ptree& section, const std::string& preset, const std::string& key) {
  const auto value = section.get_optional<T>(key);
  if (!value) throw ConfigError(fmt::format("preset '{}': missing or malformed key '{}'", preset, key));
  return *value;
}

InteractionTable parse_c6(const std::string& preset, const std::string& text, double separation) {
  InteractionTable table;
  std::vector<std::string> items;
  boost::split(items, text, boost::is_any_of(","));
  for (auto item : items) {
    boost::trim(item);
    if (item.empty()) continue;
    int n1 = 0;
    int n2 = 0;
    double value = 0.0;
    char colon = 0;
    char eq = 0;
    std::istringstream in(item);
    if (!(in >> n1 >> colon >> n2 >> eq >> value) || colon != ':' || eq != '=' || !(in >> std::ws).eof()) {
      throw ConfigError(fmt::format("preset '{}': bad c6 entry '{}' (expected n1:n2=value)", preset, item));
    }
    table.set_c6(n1, n2, value);
  }
  if (separation > 0.0) table.set_separation_um(separation);
  return table;
}

}  // namespace

std::vector<AtomLaserConfig> parse_presets(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("preset file: {}", e.what()));
  }

  std::vector<AtomLaserConfig> out;
  for (const auto& [name, section] : tree) {
    if (section.empty()) throw ConfigError(fmt::format("top-level key '{}' outside a preset section", name));
    AtomLaserConfig config;
    config.name = name;
    config.species.name = section.get<std::string>("species", name);
    try {
      config.species.mass_kg = required<double>(section, name, "mass_kg");
      config.species.rydberg_lifetime_us = required<double>(section, name, "tau_us");
      config.species.validate();
      config.geometry.lambda_lower_nm = required<double>(section, name, "lambda_lower_nm");
      config.geometry.lambda_upper_nm = required<double>(section, name, "lambda_upper_nm");
      config.geometry.excite_counterpropagating = section.get<bool>("excite_counterpropagating", true);
      config.geometry.lambda_ir_nm = required<double>(section, name, "lambda_ir_nm");
      config.geometry.ir_counterpropagating = section.get<bool>("ir_counterpropagating", true);
      config.wavevectors = config.geometry.wavevectors(name);
      config.levels.r1 = section.get<int>("n_r1", 0);
      config.levels.r2 = section.get<int>("n_r2", 0);
      config.levels.r3 = section.get<int>("n_r3", 0);
      config.interactions =
          parse_c6(name, section.get<std::string>("c6_thz_um6", ""), section.get<double>("L_um", 0.0));
    } catch (const pt::ptree_bad_data& e) {
      throw ConfigError(fmt::format("preset '{}': {}", name, e.what()));
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("preset '{}': {}", name, e.what()));
    }
    out.push_back(std::move(config));
  }
  return out;
}

std::vector<AtomLaserConfig> load_presets(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(fmt::format("cannot open preset file {}", path.string()));
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_presets(buffer.str());
}

std::string format_presets(const std::vector<AtomLaserConfig>& configs) {
  std::string out;
  for (const auto& c : configs) {
    out += fmt::format("[{}]\n", c.name);
    out += fmt::format("species = {}\n", c.species.name);
    out += fmt::format("mass_kg = {}\n", c.species.mass_kg);
    out += fmt::format("tau_us = {}\n", c.species.rydberg_lifetime_us);
    out += fmt::format("lambda_lower_nm = {}\n", c.geometry.lambda_lower_nm);
    out += fmt::format("lambda_upper_nm = {}\n", c.geometry.lambda_upper_nm);
    out += fmt::format("excite_counterpropagating = {}\n", c.geometry.excite_counterpropagating);
    out += fmt::format("lambda_ir_nm = {}\n", c.geometry.lambda_ir_nm);
    out += fmt::format("ir_counterpropagating = {}\n", c.geometry.ir_counterpropagating);
    if (c.levels.r1 != 0) {
      out += fmt::format("n_r1 = {}\nn_r2 = {}\nn_r3 = {}\n", c.levels.r1, c.levels.r2, c.levels.r3);
    }
    if (!c.interactions.entries().empty()) {
      std::vector<std::string> items;
      for (const auto& [pair, value] : c.interactions.entries()) {
        items.push_back(fmt::format("{}:{}={}", pair.first, pair.second, value));
      }
      out += fmt::format("c6_thz_um6 = {}\n", boost::join(items, ", "));
    }
    if (c.interactions.separation_um() > 0.0) out += fmt::format("L_um = {}\n", c.interactions.separation_um());
    out += "\n";
  }
  return out;
}

}  // namespace dualrail

#include "gwlab/config.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gwlab/stats.hpp"

namespace gwlab {

std::string ExperimentConfig::to_kv() const {
  std::ostringstream os;
  char buf[64];
  os << "cap=" << cap << "\n";
  os << "format=" << format << "\n";
  os << "min_gen=" << min_gen << "\n";
  os << "offspring=" << offspring_spec << "\n";
  os << "output_dir=" << output_dir << "\n";
  os << "r_grid_points=" << r_grid_points << "\n";
  os << "reps=" << reps << "\n";
  os << "seed=" << seed << "\n";
  os << "spine_length=" << spine_length << "\n";
  os << "subtree_depth=" << subtree_depth << "\n";
  os << "tail_depth=" << tail_depth << "\n";
  os << "tail_reps=" << tail_reps << "\n";
  os << "thin_horizon=" << thin_horizon << "\n";
  os << "thin_n0=" << thin_n0 << "\n";
  os << "threads=" << threads << "\n";
  os << "tree_depth=" << tree_depth << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", x_grid_hi);
  os << "x_grid_hi=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", x_grid_lo);
  os << "x_grid_lo=" << buf << "\n";
  os << "x_grid_points=" << x_grid_points << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::from_kv(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    // Trim surrounding blanks around the separator.
    while (!key.empty() && key.back() == ' ') key.pop_back();
    while (!val.empty() && val.front() == ' ') val.erase(val.begin());
    if (key == "offspring") cfg.offspring_spec = val;
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "reps") cfg.reps = std::stoll(val);
    else if (key == "tail_reps") cfg.tail_reps = std::stoll(val);
    else if (key == "tree_depth") cfg.tree_depth = std::stoi(val);
    else if (key == "spine_length") cfg.spine_length = std::stoi(val);
    else if (key == "subtree_depth") cfg.subtree_depth = std::stoi(val);
    else if (key == "tail_depth") cfg.tail_depth = std::stoi(val);
    else if (key == "min_gen") cfg.min_gen = std::stoi(val);
    else if (key == "thin_n0") cfg.thin_n0 = std::stoi(val);
    else if (key == "thin_horizon") cfg.thin_horizon = std::stoi(val);
    else if (key == "x_grid_lo") cfg.x_grid_lo = std::stod(val);
    else if (key == "x_grid_hi") cfg.x_grid_hi = std::stod(val);
    else if (key == "x_grid_points") cfg.x_grid_points = std::stoi(val);
    else if (key == "r_grid_points") cfg.r_grid_points = std::stoi(val);
    else if (key == "cap") cfg.cap = std::stoll(val);
    else if (key == "threads") cfg.threads = std::stoi(val);
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "format") cfg.format = val;
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

std::uint64_t ExperimentConfig::hash() const {
  ExperimentConfig canonical = *this;
  canonical.output_dir.clear();
  canonical.threads = 0;
  return fnv1a(canonical.to_kv());
}

}  // namespace gwlab

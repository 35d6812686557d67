#include "wsnloc/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "wsnloc/rng.hpp"

namespace wsnloc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(trim(s.substr(start)));
      break;
    }
    out.emplace_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError("config key '" + std::string(key) + "': invalid number '" + v + "'");
  return out;
}

long long parse_int(std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError("config key '" + std::string(key) + "': invalid integer '" + v + "'");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError("config key '" + std::string(key) + "': invalid unsigned integer '" +
                      v + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true or false, got '" +
                    std::string(v) + "'");
}

std::vector<Vec2> parse_vec2_list(std::string_view key, std::string_view value) {
  std::vector<Vec2> out;
  for (const std::string& piece : split(value, ';')) {
    if (piece.empty()) continue;
    std::istringstream ss(piece);
    Vec2 p;
    if (!(ss >> p.x >> p.y) || !(ss >> std::ws).eof())
      throw ConfigError("config key '" + std::string(key) + "': expected 'x y' pairs, got '" +
                        piece + "'");
    out.push_back(p);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const std::string& piece : split(value, ','))
    if (!piece.empty()) out.push_back(parse_double(key, piece));
  return out;
}

std::vector<std::string> parse_string_list(std::string_view value) {
  std::vector<std::string> out;
  for (std::string& piece : split(value, ','))
    if (!piece.empty()) out.push_back(std::move(piece));
  return out;
}

void require_positive(std::string_view key, double v) {
  if (!(v > 0.0))
    throw ConfigError("config key '" + std::string(key) + "' out of range: must be > 0, got " +
                      format_double(v));
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot write '" + path.string() + "'");
  return out;
}

// Ratio tag usable in file names: 0.05 -> "0p05".
std::string ratio_tag(double ratio) {
  std::string s = format_double(ratio);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

TopologyConfig ScenarioConfig::topology() const {
  TopologyConfig t;
  t.n_sensors = n_sensors;
  t.anchor_positions = anchor_positions;
  t.area_length = area_length;
  t.area_width = area_width;
  t.comm_range = comm_range;
  return t;
}

void validate_config(const ScenarioConfig& c) {
  require_positive("area_length", c.area_length);
  require_positive("area_width", c.area_width);
  if (c.n_sensors < 0) throw ConfigError("config key 'n_sensors' out of range: must be >= 0");
  if (c.anchor_positions.size() < 3)
    throw ConfigError("config key 'anchor_positions' out of range: need at least 3 anchors");
  require_positive("comm_range", c.comm_range);
  require_positive("sigma", c.sigma);
  require_positive("nlos_bias_mean_m", c.nlos_bias_mean_m);
  if (!(c.nlos_ratio >= 0.0 && c.nlos_ratio <= 1.0))
    throw ConfigError("config key 'nlos_ratio' out of range: " + format_double(c.nlos_ratio) +
                      " not in [0,1]");
  if (c.nlos_ratios.empty())
    throw ConfigError("config key 'nlos_ratios' out of range: list must not be empty");
  for (double r : c.nlos_ratios)
    if (!(r >= 0.0 && r <= 1.0))
      throw ConfigError("config key 'nlos_ratios' out of range: " + format_double(r) +
                        " not in [0,1]");
  if (c.samples_per_link < 1)
    throw ConfigError("config key 'samples_per_link' out of range: must be >= 1");
  if (c.n_resample < 1)
    throw ConfigError("config key 'n_resample' out of range: must be >= 1");
  require_positive("huber_alpha", c.huber_alpha);
  if (c.huber_sigma) require_positive("huber_sigma", *c.huber_sigma);
  require_positive("gamma", c.gamma);
  require_positive("epsilon", c.epsilon);
  if (c.max_iterations < 1)
    throw ConfigError("config key 'max_iterations' out of range: must be >= 1");
  if (c.n_trials < 1) throw ConfigError("config key 'n_trials' out of range: must be >= 1");
  if (c.algorithms.empty())
    throw ConfigError("config key 'algorithms' out of range: list must not be empty");
  for (const std::string& a : c.algorithms)
    if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), a) ==
        kAlgorithmNames.end())
      throw ConfigError("config key 'algorithms': unknown algorithm '" + a + "'");
  if (c.jobs < 0) throw ConfigError("config key 'jobs' out of range: must be >= 0");
}

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = text.find('\n', start);
    std::string_view line =
        text.substr(start, eol == std::string_view::npos ? text.size() - start : eol - start);
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + std::string(line) + "'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!entries.emplace(std::move(key), std::move(value)).second)
      throw ConfigError("duplicate config key '" + std::string(trim(line.substr(0, eq))) +
                        "'");
  }

  ScenarioConfig c;
  auto take = [&entries](std::string_view key) -> std::optional<std::string> {
    auto it = entries.find(std::string(key));
    if (it == entries.end()) return std::nullopt;
    std::string v = std::move(it->second);
    entries.erase(it);
    return v;
  };

  if (auto v = take("area_length")) c.area_length = parse_double("area_length", *v);
  if (auto v = take("area_width")) c.area_width = parse_double("area_width", *v);
  if (auto v = take("n_sensors")) c.n_sensors = static_cast<int>(parse_int("n_sensors", *v));
  if (auto v = take("anchor_positions"))
    c.anchor_positions = parse_vec2_list("anchor_positions", *v);
  if (auto v = take("comm_range")) c.comm_range = parse_double("comm_range", *v);
  if (auto v = take("sigma")) c.sigma = parse_double("sigma", *v);
  if (auto v = take("nlos_bias_mean_m"))
    c.nlos_bias_mean_m = parse_double("nlos_bias_mean_m", *v);
  if (auto v = take("nlos_ratio")) c.nlos_ratio = parse_double("nlos_ratio", *v);
  if (auto v = take("nlos_ratios")) c.nlos_ratios = parse_double_list("nlos_ratios", *v);
  if (auto v = take("samples_per_link"))
    c.samples_per_link = static_cast<int>(parse_int("samples_per_link", *v));
  if (auto v = take("n_resample"))
    c.n_resample = static_cast<int>(parse_int("n_resample", *v));
  if (auto v = take("huber_alpha")) c.huber_alpha = parse_double("huber_alpha", *v);
  if (auto v = take("huber_sigma")) c.huber_sigma = parse_double("huber_sigma", *v);
  if (auto v = take("gamma")) c.gamma = parse_double("gamma", *v);
  if (auto v = take("epsilon")) c.epsilon = parse_double("epsilon", *v);
  if (auto v = take("max_iterations"))
    c.max_iterations = static_cast<int>(parse_int("max_iterations", *v));
  if (auto v = take("n_trials")) c.n_trials = static_cast<int>(parse_int("n_trials", *v));
  if (auto v = take("master_seed")) c.master_seed = parse_u64("master_seed", *v);
  if (auto v = take("algorithms")) c.algorithms = parse_string_list(*v);
  if (auto v = take("init_strategy")) {
    if (*v == "uniform_random")
      c.init_strategy = InitStrategy::UniformRandom;
    else if (*v == "anchor_centroid")
      c.init_strategy = InitStrategy::AnchorCentroid;
    else
      throw ConfigError(
          "config key 'init_strategy': expected uniform_random or anchor_centroid, got '" +
          *v + "'");
  }
  if (auto v = take("fresh_bias_per_sample"))
    c.fresh_bias_per_sample = parse_bool("fresh_bias_per_sample", *v);
  if (auto v = take("include_anchors")) c.include_anchors = parse_bool("include_anchors", *v);
  if (auto v = take("fixed_topology")) c.fixed_topology = parse_bool("fixed_topology", *v);
  if (auto v = take("resample_isolated"))
    c.resample_isolated = parse_bool("resample_isolated", *v);
  if (auto v = take("jobs")) c.jobs = static_cast<int>(parse_int("jobs", *v));

  if (!entries.empty())
    throw ConfigError("unknown config key '" + entries.begin()->first + "'");

  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "area_length = " << format_double(c.area_length) << '\n';
  out << "area_width = " << format_double(c.area_width) << '\n';
  out << "n_sensors = " << c.n_sensors << '\n';
  out << "anchor_positions = ";
  for (std::size_t i = 0; i < c.anchor_positions.size(); ++i) {
    if (i) out << "; ";
    out << format_double(c.anchor_positions[i].x) << ' '
        << format_double(c.anchor_positions[i].y);
  }
  out << '\n';
  out << "comm_range = " << format_double(c.comm_range) << '\n';
  out << "sigma = " << format_double(c.sigma) << '\n';
  out << "nlos_bias_mean_m = " << format_double(c.nlos_bias_mean_m) << '\n';
  out << "nlos_ratio = " << format_double(c.nlos_ratio) << '\n';
  out << "nlos_ratios = ";
  for (std::size_t i = 0; i < c.nlos_ratios.size(); ++i) {
    if (i) out << ", ";
    out << format_double(c.nlos_ratios[i]);
  }
  out << '\n';
  out << "samples_per_link = " << c.samples_per_link << '\n';
  out << "n_resample = " << c.n_resample << '\n';
  out << "huber_alpha = " << format_double(c.huber_alpha) << '\n';
  if (c.huber_sigma) out << "huber_sigma = " << format_double(*c.huber_sigma) << '\n';
  out << "gamma = " << format_double(c.gamma) << '\n';
  out << "epsilon = " << format_double(c.epsilon) << '\n';
  out << "max_iterations = " << c.max_iterations << '\n';
  out << "n_trials = " << c.n_trials << '\n';
  out << "master_seed = " << c.master_seed << '\n';
  out << "algorithms = ";
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
    if (i) out << ", ";
    out << c.algorithms[i];
  }
  out << '\n';
  out << "init_strategy = "
      << (c.init_strategy == InitStrategy::AnchorCentroid ? "anchor_centroid"
                                                          : "uniform_random")
      << '\n';
  out << "fresh_bias_per_sample = " << (c.fresh_bias_per_sample ? "true" : "false") << '\n';
  out << "include_anchors = " << (c.include_anchors ? "true" : "false") << '\n';
  out << "fixed_topology = " << (c.fixed_topology ? "true" : "false") << '\n';
  out << "resample_isolated = " << (c.resample_isolated ? "true" : "false") << '\n';
  out << "jobs = " << c.jobs << '\n';
  return out.str();
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << serialize_config(config);
  if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
}

namespace {

struct CsvTable {
  std::vector<std::vector<std::string>> rows;  // header excluded
};

CsvTable read_csv(const std::filesystem::path& path, std::string_view expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataFormatError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (trim(line) != expected_header)
    throw DataFormatError("'" + path.string() + "': expected header '" +
                          std::string(expected_header) + "', got '" + line + "'");
  CsvTable table;
  const std::size_t n_cols = split(expected_header, ',').size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != n_cols)
      throw DataFormatError("'" + path.string() + "' line " + std::to_string(line_no) +
                            ": expected " + std::to_string(n_cols) + " fields");
    table.rows.push_back(std::move(fields));
  }
  return table;
}

long long csv_int(const std::filesystem::path& path, const std::string& field) {
  long long out = 0;
  const auto* end = field.data() + field.size();
  const auto [p, ec] = std::from_chars(field.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw DataFormatError("'" + path.string() + "': invalid integer '" + field + "'");
  return out;
}

double csv_double(const std::filesystem::path& path, const std::string& field) {
  double out = 0.0;
  const auto* end = field.data() + field.size();
  const auto [p, ec] = std::from_chars(field.data(), end, out);
  if (ec != std::errc{} || p != end || !std::isfinite(out))
    throw DataFormatError("'" + path.string() + "': invalid number '" + field + "'");
  return out;
}

}  // namespace

LoadedDataset load_dataset(const std::filesystem::path& node_path,
                           const std::filesystem::path& range_path) {
  const CsvTable node_table = read_csv(node_path, "id,role,x,y");
  const CsvTable range_table = read_csv(range_path, "i,j,l,range_m");

  struct NodeRec {
    long long ext_id;
    bool anchor;
    Vec2 pos;
  };
  std::vector<NodeRec> nodes;
  std::unordered_set<long long> seen_ids;
  for (const auto& row : node_table.rows) {
    NodeRec rec;
    rec.ext_id = csv_int(node_path, row[0]);
    if (row[1] == "sensor")
      rec.anchor = false;
    else if (row[1] == "anchor")
      rec.anchor = true;
    else
      throw DataFormatError("'" + node_path.string() + "': unknown role '" + row[1] + "'");
    rec.pos = {csv_double(node_path, row[2]), csv_double(node_path, row[3])};
    if (!seen_ids.insert(rec.ext_id).second)
      throw DataFormatError("'" + node_path.string() + "': duplicate node id " +
                            std::to_string(rec.ext_id));
    nodes.push_back(rec);
  }

  LoadedDataset out;
  Network& net = out.network;
  std::unordered_map<long long, int> id_to_index;
  // Sensors keep file order and come first; anchors follow.
  for (const NodeRec& rec : nodes)
    if (!rec.anchor) {
      id_to_index[rec.ext_id] = net.n_sensors++;
      net.positions.push_back(rec.pos);
    }
  for (const NodeRec& rec : nodes)
    if (rec.anchor) {
      id_to_index[rec.ext_id] = net.n_sensors + net.n_anchors++;
      net.positions.push_back(rec.pos);
    }
  if (net.n_anchors < 3)
    throw DataFormatError("'" + node_path.string() + "': need at least 3 anchors, found " +
                          std::to_string(net.n_anchors));

  double min_x = net.positions.front().x, max_x = min_x;
  double min_y = net.positions.front().y, max_y = min_y;
  for (const Vec2& p : net.positions) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  net.area_origin = {min_x, min_y};
  net.area_length = max_x - min_x;
  net.area_width = max_y - min_y;
  net.comm_range = 0.0;  // unknown for measured campaigns

  // Collect per unordered pair, per sample index, up to one entry per direction.
  struct PairSamples {
    std::map<int, std::vector<std::pair<bool, double>>> by_sample;  // (i<j direction?, r)
  };
  std::map<std::pair<int, int>, PairSamples> pairs;
  int max_l = 0;
  for (const auto& row : range_table.rows) {
    const long long ei = csv_int(range_path, row[0]);
    const long long ej = csv_int(range_path, row[1]);
    const int l = static_cast<int>(csv_int(range_path, row[2]));
    const double r = csv_double(range_path, row[3]);
    const auto it_i = id_to_index.find(ei);
    const auto it_j = id_to_index.find(ej);
    if (it_i == id_to_index.end() || it_j == id_to_index.end())
      throw DataFormatError("'" + range_path.string() + "': range entry references unknown id " +
                            std::to_string(it_i == id_to_index.end() ? ei : ej));
    if (it_i->second == it_j->second)
      throw DataFormatError("'" + range_path.string() + "': self-ranging entry for id " +
                            std::to_string(ei));
    if (l < 1)
      throw DataFormatError("'" + range_path.string() + "': sample index must be >= 1");
    max_l = std::max(max_l, l);
    const int a = std::min(it_i->second, it_j->second);
    const int b = std::max(it_i->second, it_j->second);
    const bool forward = it_i->second < it_j->second;
    auto& entries = pairs[{a, b}].by_sample[l];
    for (const auto& [dir, _] : entries)
      if (dir == forward)
        throw DataFormatError("'" + range_path.string() + "': duplicate entry for pair (" +
                              std::to_string(ei) + "," + std::to_string(ej) + ") sample " +
                              std::to_string(l));
    entries.emplace_back(forward, r);
  }
  if (pairs.empty())
    throw DataFormatError("'" + range_path.string() + "': no range entries");

  MeasurementSet& ms = out.measurements;
  ms.samples_per_link = max_l;
  for (const auto& [pair, samples] : pairs) {
    net.links.push_back({pair.first, pair.second});
    for (int l = 1; l <= max_l; ++l) {
      const auto it = samples.by_sample.find(l);
      if (it == samples.by_sample.end())
        throw DataFormatError("'" + range_path.string() + "': pair (" +
                              std::to_string(pair.first) + "," + std::to_string(pair.second) +
                              ") missing sample " + std::to_string(l));
      double r = 0.0;
      for (const auto& [_, v] : it->second) r += v;
      r /= static_cast<double>(it->second.size());
      if (it->second.size() == 2) {
        const double a = it->second[0].second, b = it->second[1].second;
        const double denom = std::max(std::abs(a), std::abs(b));
        if (denom > 0.0 && std::abs(a - b) / denom > 0.10)
          out.warnings.push_back("asymmetric range for pair (" + std::to_string(pair.first) +
                                 "," + std::to_string(pair.second) + ") sample " +
                                 std::to_string(l) + ": " + format_double(a) + " vs " +
                                 format_double(b));
      }
      ms.ranges.push_back(r);
    }
  }
  ms.links = net.links;
  ms.conditions.assign(net.links.size(), LinkCondition::Los);  // unknown in the field

  net.neighbors.assign(static_cast<std::size_t>(net.n_nodes()), {});
  for (const Link& link : net.links) {
    net.neighbors[link.a].push_back(link.b);
    net.neighbors[link.b].push_back(link.a);
  }
  for (auto& nb : net.neighbors) std::sort(nb.begin(), nb.end());
  net.rebuild_link_index();
  return out;
}

void export_dataset(const Network& network, const MeasurementSet& ms,
                    const std::filesystem::path& node_path,
                    const std::filesystem::path& range_path) {
  {
    auto out = open_output(node_path);
    out << "id,role,x,y\n";
    for (int id = 0; id < network.n_nodes(); ++id)
      out << (id + 1) << ',' << (network.is_anchor(id) ? "anchor" : "sensor") << ','
          << format_double(network.positions[id].x) << ','
          << format_double(network.positions[id].y) << '\n';
    if (!out) throw DataFormatError("failed writing '" + node_path.string() + "'");
  }
  {
    auto out = open_output(range_path);
    out << "i,j,l,range_m\n";
    for (std::size_t k = 0; k < ms.links.size(); ++k)
      for (int l = 0; l < ms.samples_per_link; ++l)
        out << (ms.links[k].a + 1) << ',' << (ms.links[k].b + 1) << ',' << (l + 1) << ','
            << format_double(ms.range(static_cast<int>(k), l)) << '\n';
    if (!out) throw DataFormatError("failed writing '" + range_path.string() + "'");
  }
}

std::vector<std::filesystem::path> export_results(
    std::span<const MetricsRow> rows, std::span<const NamedEcdf> ecdfs,
    std::span<const NamedTrace> traces, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  {
    const auto path = out_dir / "metrics.csv";
    auto out = open_output(path);
    out << "algorithm,nlos_ratio,trial,rmse,ger,gde\n";
    for (const MetricsRow& row : rows)
      out << row.algorithm << ',' << format_double(row.nlos_ratio) << ',' << row.trial << ','
          << format_double(row.rmse) << ',' << format_double(row.ger) << ','
          << format_double(row.gde) << '\n';
    if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }

  for (const NamedEcdf& e : ecdfs) {
    const auto path =
        out_dir / ("ecdf_" + e.algorithm + "_" + ratio_tag(e.nlos_ratio) + ".csv");
    auto out = open_output(path);
    out << "value,cum_prob\n";
    for (std::size_t k = 0; k < e.table.values.size(); ++k)
      out << format_double(e.table.values[k]) << ',' << format_double(e.table.probs[k])
          << '\n';
    if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }

  for (const NamedTrace& t : traces) {
    const auto path = out_dir / ("trace_" + t.algorithm + "_" + ratio_tag(t.nlos_ratio) +
                                 "_" + std::to_string(t.trial) + ".csv");
    auto out = open_output(path);
    out << "iteration,max_delta,cost,messages\n";
    const std::size_t n = t.trace.max_deltas.size();
    const std::uint64_t per_round = n == 0 ? 0 : t.trace.messages_sent / n;
    for (std::size_t k = 0; k < n; ++k) {
      out << (k + 1) << ',' << format_double(t.trace.max_deltas[k]) << ',';
      if (k < t.trace.costs.size())
        out << format_double(t.trace.costs[k]);
      else
        out << "nan";
      out << ',' << per_round * (k + 1) << '\n';
    }
    if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> export_sweep(std::span<const SweepRow> rows,
                                                std::span<const SweepEcdf> ecdfs,
                                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  {
    const auto path = out_dir / "sweep_rmse.csv";
    auto out = open_output(path);
    out << "samples_per_link,trial,rmse,ger,gde\n";
    for (const SweepRow& row : rows)
      out << row.samples_per_link << ',' << row.trial << ',' << format_double(row.rmse)
          << ',' << format_double(row.ger) << ',' << format_double(row.gde) << '\n';
    if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  for (const SweepEcdf& e : ecdfs) {
    const auto path =
        out_dir / ("ecdf_sweep_L" + std::to_string(e.samples_per_link) + ".csv");
    auto out = open_output(path);
    out << "value,cum_prob\n";
    for (std::size_t k = 0; k < e.table.values.size(); ++k)
      out << format_double(e.table.values[k]) << ',' << format_double(e.table.probs[k])
          << '\n';
    if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

void export_estimates(const Network& network, std::span<const Vec2> estimates,
                      const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "id,role,true_x,true_y,est_x,est_y\n";
  for (int id = 0; id < network.n_nodes(); ++id)
    out << (id + 1) << ',' << (network.is_anchor(id) ? "anchor" : "sensor") << ','
        << format_double(network.positions[id].x) << ','
        << format_double(network.positions[id].y) << ',' << format_double(estimates[id].x)
        << ',' << format_double(estimates[id].y) << '\n';
  if (!out) throw DataFormatError("failed writing '" + path.string() + "'");
}

}  // namespace wsnloc

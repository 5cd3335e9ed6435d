#include "holobench/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "holobench/error.hpp"
#include "json.hpp"

namespace holo {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols_if_empty) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    require(static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) == cols,
            ErrorKind::SchemaMismatch, "ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c)
      M(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

void check_schema(const json& j, const std::string& kind) {
  require(j.is_object() && j.contains("schema_version"), ErrorKind::SchemaMismatch,
          "missing schema_version");
  const int v = j.at("schema_version").get<int>();
  require(v == kSchemaVersion, ErrorKind::SchemaMismatch,
          "unsupported schema_version " + std::to_string(v) + " (expected " +
              std::to_string(kSchemaVersion) + ")");
  if (j.contains("kind"))
    require(j.at("kind").get<std::string>() == kind, ErrorKind::SchemaMismatch,
            "expected a " + kind + " document");
}

}  // namespace

std::string network_to_json(const Network& net) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "network";
  j["activation"] = net.activation.name();
  j["theta"] = net.theta;
  json layers = json::array();
  for (const auto& l : net.layers) {
    json b = json::array();
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) b.push_back(l.bias[i]);
    layers.push_back({{"weights", matrix_to_json(l.weights)}, {"bias", std::move(b)}});
  }
  j["layers"] = std::move(layers);
  j["head"] = net.head ? matrix_to_json(*net.head) : json(nullptr);
  return j.dump();
}

Network network_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("network JSON does not parse: ") + e.what());
  }
  check_schema(j, "network");
  try {
    Network net;
    net.activation = Activation::parse(j.at("activation").get<std::string>());
    net.theta = j.at("theta").get<std::vector<std::uint32_t>>();
    Eigen::Index in = static_cast<Eigen::Index>(net.theta.size());
    for (const auto& l : j.at("layers")) {
      AffineLayer layer;
      layer.weights = matrix_from_json(l.at("weights"), in);
      const auto& b = l.at("bias");
      layer.bias.resize(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i) layer.bias[static_cast<Eigen::Index>(i)] = b[i].get<double>();
      in = layer.weights.rows();
      net.layers.push_back(std::move(layer));
    }
    if (!j.at("head").is_null()) net.head = matrix_from_json(j.at("head"), 0);
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("malformed network JSON: ") + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  write_text(path, network_to_json(net) + "\n");
}

Network load_network(const std::filesystem::path& path) { return network_from_json(read_text(path)); }

std::string solve_report_to_json(const SolveReport& r, bool with_history) {
  json j{{"schema_version", kSchemaVersion},
         {"kind", "solve-report"},
         {"final_objective", r.final_objective},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"eopt_proxy", r.eopt_proxy},
         {"residual", r.residual},
         {"operator_norm", r.operator_norm},
         {"rank_deficient", r.rank_deficient},
         {"channelwise", r.channelwise}};
  if (with_history) j["history"] = r.history;
  return j.dump();
}

std::string certificate_to_json(const EmulationCertificate& c) {
  json j{{"schema_version", kSchemaVersion},
         {"kind", "emulation-certificate"},
         {"delta", c.delta},
         {"grid_error", c.grid_error},
         {"active_dims", c.active_dims},
         {"points_per_dim", c.points_per_dim},
         {"evaluations", c.evaluations},
         {"sampled", c.sampled},
         {"certified", c.certified},
         {"retries", c.retries},
         {"relu_levels", c.relu_levels},
         {"tanh_scale", c.tanh_scale},
         {"product_bound", c.product_bound}};
  return j.dump();
}

void write_matrix_csv(const Eigen::MatrixXd& M, const std::filesystem::path& path) {
  std::ostringstream os;
  char buf[32];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, M(i, j));
      if (j) os << ',';
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
  write_text(path, os.str());
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t next = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      auto res = std::from_chars(line.data() + pos, line.data() + next, v);
      require(res.ec == std::errc(), ErrorKind::Io, "bad number in " + path.string());
      r.push_back(v);
      pos = next + 1;
    }
    require(rows.empty() || rows.front().size() == r.size(), ErrorKind::Io,
            "ragged CSV " + path.string());
    rows.push_back(std::move(r));
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return M;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace holo

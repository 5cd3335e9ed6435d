#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "holobench/dnnbuilder.hpp"
#include "holobench/network.hpp"
#include "holobench/solvers.hpp"

namespace holo {

/// Every file written by holobench carries this schema_version.
inline constexpr int kSchemaVersion = 1;

/// {schema_version, kind: "network", activation, theta, layers: [{weights, bias}], head}.
/// Doubles are written in shortest round-trip form, so load(save(net)) is bit-exact.
std::string network_to_json(const Network& net);
/// SchemaMismatch on a missing or different schema_version.
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

std::string solve_report_to_json(const SolveReport& report, bool with_history = false);
std::string certificate_to_json(const EmulationCertificate& cert);

/// Plain CSV, one matrix row per line, no header.
void write_matrix_csv(const Eigen::MatrixXd& M, const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace holo

#pragma once

#include <string>
#include <vector>

#include "gcflow/flow.hpp"
#include "gcflow/inequalities.hpp"

namespace gcf::cli {

/// Provenance stamped into every output file.
struct Stamp {
  std::string command;
  std::string digest;
};

std::string tool_version();

std::string trajectory_csv(const Stamp& s, int dim, const std::vector<DiagnosticsRecord>& rows);
std::string checks_csv(const Stamp& s, const std::vector<CheckReport>& reports);
std::string checks_json(const Stamp& s, const std::vector<CheckReport>& reports);
/// Boundary curves of n = 1 bodies, blue (first) to red (last).
std::string curves_svg(const Stamp& s, const std::vector<SupportFunction>& bodies,
                       const std::vector<double>& times);
/// Boundary mesh of an n = 2 body: one vertex per node, quads between rings
/// and a polygon closing each polar cap.
std::string body_obj(const Stamp& s, const SupportFunction& u);
std::string body_text(const Stamp& s, const SupportFunction& u);

/// Writes `text` to `path`, creating parent directories. Throws UsageError.
void write_file(const std::string& path, const std::string& text);

}  // namespace gcf::cli

#include "export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "json.hpp"

namespace gcf::cli {

namespace {

using nlohmann::ordered_json;

std::string num(double v) { return format_double(v); }

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string header_line(const char* lead, const Stamp& s) {
  return std::string(lead) + "gcflow " + tool_version() + " " + s.command + " config=" + s.digest;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json json_num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::string tool_version() { return GCFLOW_VERSION; }

std::string trajectory_csv(const Stamp& s, int dim, const std::vector<DiagnosticsRecord>& rows) {
  std::ostringstream os;
  os << header_line("# ", s) << '\n';
  os << "time,steps,dt,volume,radius,entropy,entropy_origin,entropy_gradient,zalpha,eta,"
        "min_u,max_u,min_K,max_K,w_plus,w_minus,rho_plus,rho_minus,soliton_residual,"
        "soliton_lambda,dissipation,tail_fraction,cumulative_rescale,J1,J2,J3,Q";
  for (int k = 0; k <= dim; ++k) os << ",entropy_point_" << k;
  os << '\n';
  const double ball = unit_ball_volume(dim);
  for (const auto& r : rows) {
    const double radius = std::pow(r.volume / ball, 1.0 / (dim + 1));
    for (double v : {r.time, static_cast<double>(r.steps), r.dt, r.volume, radius, r.entropy,
                     r.entropy_origin, r.entropy_gradient, r.zalpha, r.eta, r.min_u, r.max_u,
                     r.min_K, r.max_K, r.w_plus, r.w_minus, r.rho_plus, r.rho_minus,
                     r.soliton_residual, r.soliton_lambda, r.dissipation, r.tail_fraction,
                     r.cumulative_rescale, r.J1, r.J2})
      os << num(v) << ',';
    os << (r.has_J3 ? num(r.J3) : "") << ',' << num(r.Q);
    for (int k = 0; k <= dim; ++k) os << ',' << num(k < r.entropy_point.size() ? r.entropy_point[k] : 0.0);
    os << '\n';
  }
  return os.str();
}

std::string checks_csv(const Stamp& s, const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << header_line("# ", s) << '\n';
  os << "name,inputs,lhs,rhs,slack,tolerance,pass,identity,informational,note\n";
  for (const auto& r : reports)
    os << csv_field(r.name) << ',' << csv_field(r.inputs) << ',' << num(r.lhs) << ',' << num(r.rhs)
       << ',' << num(r.slack) << ',' << num(r.tolerance) << ',' << (r.pass ? 1 : 0) << ','
       << (r.identity ? 1 : 0) << ',' << (r.informational ? 1 : 0) << ',' << csv_field(r.note)
       << '\n';
  return os.str();
}

std::string checks_json(const Stamp& s, const std::vector<CheckReport>& reports) {
  ordered_json j;
  j["tool"] = "gcflow";
  j["version"] = tool_version();
  j["command"] = s.command;
  j["config_digest"] = s.digest;
  j["failures"] = count_failures(reports);
  j["checks"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json c;
    c["name"] = r.name;
    c["inputs"] = r.inputs;
    c["lhs"] = json_num(r.lhs);
    c["rhs"] = json_num(r.rhs);
    c["slack"] = json_num(r.slack);
    c["tolerance"] = json_num(r.tolerance);
    c["pass"] = r.pass;
    c["identity"] = r.identity;
    c["informational"] = r.informational;
    if (!r.note.empty()) c["note"] = r.note;
    j["checks"].push_back(std::move(c));
  }
  return j.dump(1) + "\n";
}

std::string curves_svg(const Stamp& s, const std::vector<SupportFunction>& bodies,
                       const std::vector<double>& times) {
  std::vector<std::vector<Vec>> curves;
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& b : bodies) {
    curves.push_back(boundary_points(b));
    for (const auto& p : curves.back()) {
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
  }
  const double size = 600.0, margin = 20.0;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
  const double scale = (size - 2 * margin) / span;
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << header_line("<!-- ", s) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
  os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const double f = curves.size() > 1 ? static_cast<double>(c) / (curves.size() - 1) : 1.0;
    const int red = static_cast<int>(std::lround(255 * f));
    os << "<polygon fill=\"none\" stroke-width=\"1\" stroke=\"rgb(" << red << ",0," << 255 - red
       << ")\" data-time=\"" << num(c < times.size() ? times[c] : 0.0) << "\" points=\"";
    for (std::size_t i = 0; i < curves[c].size(); ++i) {
      const auto& p = curves[c][i];
      os << (i ? " " : "") << short_num(size / 2 + scale * (p[0] - cx)) << ','
         << short_num(size / 2 - scale * (p[1] - cy));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string body_obj(const Stamp& s, const SupportFunction& u) {
  const auto pts = boundary_points(u);
  const std::size_t L = static_cast<std::size_t>(u.grid->bandlimit());
  const std::size_t rings = 2 * L, lon = 4 * L;
  std::ostringstream os;
  os << header_line("# ", s) << '\n';
  for (const auto& p : pts) os << "v " << num(p[0]) << ' ' << num(p[1]) << ' ' << num(p[2]) << '\n';
  const auto& grid = *u.grid;

  // Faces are emitted counter-clockwise seen from outside, judged by the
  // outward normal at the face's first node.
  auto emit = [&](std::vector<std::size_t> idx) {
    Vec n = Vec::Zero(3);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Vec& a = pts[idx[k]];
      const Vec& b = pts[idx[(k + 1) % idx.size()]];
      n[0] += (a[1] - b[1]) * (a[2] + b[2]);
      n[1] += (a[2] - b[2]) * (a[0] + b[0]);
      n[2] += (a[0] - b[0]) * (a[1] + b[1]);
    }
    if (n.dot(grid.node(idx[0])) < 0) std::reverse(idx.begin(), idx.end());
    os << 'f';
    for (auto i : idx) os << ' ' << i + 1;
    os << '\n';
  };
  for (std::size_t r = 0; r + 1 < rings; ++r)
    for (std::size_t j = 0; j < lon; ++j) {
      const std::size_t j1 = (j + 1) % lon;
      emit({r * lon + j, r * lon + j1, (r + 1) * lon + j1, (r + 1) * lon + j});
    }
  for (std::size_t r : {std::size_t{0}, rings - 1}) {
    std::vector<std::size_t> cap(lon);
    for (std::size_t j = 0; j < lon; ++j) cap[j] = r * lon + j;
    emit(cap);
  }
  return os.str();
}

std::string body_text(const Stamp& s, const SupportFunction& u) {
  std::ostringstream os;
  write_body(os, u, {{"tool", "gcflow " + tool_version()}, {"command", s.command}, {"config", s.digest}});
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
  if (!out) throw UsageError("write failed for '" + path + "'");
}

}  // namespace gcf::cli

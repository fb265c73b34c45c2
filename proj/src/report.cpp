#include "shelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string verdict(const CheckReport& r) {
  if (r.pass) return "PASS";
  return r.inconclusive ? "INCONCLUSIVE" : "FAIL";
}

}  // namespace

std::string file_stem(const std::string& name) {
  std::string s;
  for (char c : name) s += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
  return s;
}

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = number(v);
  return {{"name", r.name},
          {"verdict", verdict(r)},
          {"pass", r.pass},
          {"inconclusive", r.inconclusive},
          {"statistic", number(r.statistic)},
          {"bound", number(r.bound)},
          {"coarse", number(r.coarse)},
          {"fine", number(r.fine)},
          {"stderr", number(r.stderr_)},
          {"runtime_seconds", r.runtime_seconds},
          {"note", r.note},
          {"diagnostics", diag}};
}

void write_summary_csv(const std::string& path, const std::vector<CheckReport>& reports) {
  auto out = open_out(path);
  out << "name,statistic,bound,coarse,fine,stderr,pass,inconclusive,runtime_seconds,note\n";
  for (const auto& r : reports)
    out << csv_field(r.name) << ',' << r.statistic << ',' << r.bound << ',' << r.coarse << ',' << r.fine << ','
        << r.stderr_ << ',' << (r.pass ? 1 : 0) << ',' << (r.inconclusive ? 1 : 0) << ',' << r.runtime_seconds << ','
        << csv_field(r.note) << '\n';
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

void write_summary_json(const std::string& path, const std::vector<CheckReport>& reports, const nlohmann::json& extra) {
  nlohmann::json doc = extra.is_object() ? extra : nlohmann::json::object();
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
  write_json(path, doc);
}

void write_detail_csv(const std::string& path, const DetailTable& table) {
  auto out = open_out(path);
  for (size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_detail_svg(const std::string& path, const CheckReport& r) {
  const auto& t = r.detail;
  if (t.columns.size() < 2 || t.rows.empty()) return;
  const bool grouped = t.columns.front() == "n_x" && t.columns.size() >= 3;
  const size_t xc = grouped ? 1 : 0, yc = t.columns.size() - 1;
  std::map<double, std::vector<std::pair<double, double>>> lines;
  bool logx = true, logy = true;
  for (const auto& row : t.rows) {
    const double x = row[xc], y = row[yc];
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    logx = logx && x > 0;
    logy = logy && y > 0;
    lines[grouped ? row[0] : 0.0].emplace_back(x, y);
  }
  if (lines.empty()) return;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [k, pts] : lines)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double W = 480, H = 320, m = 50;
  auto px = [&](double x) { return m + (tx(x) - x0) / (x1 - x0) * (W - 2 * m); };
  auto py = [&](double y) { return H - m - (ty(y) - y0) / (y1 - y0) * (H - 2 * m); };
  auto out = open_out(path);
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << (logx ? "log10 " : "") << t.columns[xc] << "</text>\n";
  out << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">" << (logy ? "log10 " : "") << t.columns[yc] << "</text>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << r.name << "</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int c = 0;
  for (auto& [k, pts] : lines) {
    std::sort(pts.begin(), pts.end());
    out << "<polyline fill=\"none\" stroke=\"" << colors[c++ % 4] << "\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

void print_reports(std::ostream& os, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    os << std::left << std::setw(13) << verdict(r) << std::setw(34) << r.name << " statistic=" << std::setprecision(6)
       << r.statistic;
    if (std::isfinite(r.bound)) os << " bound=" << r.bound;
    if (r.coarse != r.fine) os << " coarse=" << r.coarse << " fine=" << r.fine;
    os << " (" << std::fixed << std::setprecision(1) << r.runtime_seconds << " s)" << std::defaultfloat;
    if (!r.note.empty()) os << "  " << r.note;
    os << '\n';
  }
}

}  // namespace shelab

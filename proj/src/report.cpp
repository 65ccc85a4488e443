#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "afbench/experiment.hpp"

namespace afbench {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string display(double v) { return fixed(round_half_up(v, 2), 2); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string render_raw_csv(const ResultTable& table) {
  std::string out = "config,activation,run,seed,accuracy\n";
  for (std::size_t c = 0; c < table.configs().size(); ++c) {
    for (std::size_t a = 0; a < table.activations().size(); ++a) {
      for (const auto& r : table.runs(c, a)) {
        out += table.configs()[c] + "," + std::string(activation_name(table.activations()[a])) +
               "," + std::to_string(r.run) + "," + (r.seed ? std::to_string(*r.seed) : "") + "," +
               fixed(r.accuracy, 6) + "\n";
      }
    }
  }
  return out;
}

std::string render_summary_csv(const ResultTable& table) {
  std::string out = "config,activation,runs,mean_accuracy\n";
  for (std::size_t c = 0; c < table.configs().size(); ++c) {
    for (std::size_t a = 0; a < table.activations().size(); ++a) {
      out += table.configs()[c] + "," + std::string(activation_name(table.activations()[a])) + "," +
             std::to_string(table.runs(c, a).size()) + "," + fixed(table.mean(c, a), 6) + "\n";
    }
  }
  return out;
}

std::string render_curves_csv(const ResultTable& table) {
  std::string out = "config,activation,run,epoch,mean_loss,accuracy\n";
  for (std::size_t c = 0; c < table.configs().size(); ++c) {
    for (std::size_t a = 0; a < table.activations().size(); ++a) {
      for (const auto& r : table.runs(c, a)) {
        for (const auto& e : r.curve) {
          out += table.configs()[c] + "," +
                 std::string(activation_name(table.activations()[a])) + "," +
                 std::to_string(r.run) + "," + std::to_string(e.epoch) + "," +
                 fixed(e.mean_loss, 8) + "," + fixed(e.accuracy, 6) + "\n";
        }
      }
    }
  }
  return out;
}

std::string render_markdown(const ResultTable& table, const RankReport& report) {
  const auto& configs = table.configs();
  const auto& acts = table.activations();
  std::ostringstream md;

  md << "# Activation benchmark report\n\n";
  md << "Baseline: " << activation_label(report.baseline) << ". Runs per cell: "
     << table.run_count() << ".\n\n";

  md << "## Classification accuracy (%)\n\n";
  md << "| Activation |";
  for (const auto& c : configs) md << ' ' << c << " |";
  md << " Score |\n|---|";
  for (std::size_t c = 0; c < configs.size(); ++c) md << "---:|";
  md << "---:|\n";
  for (std::size_t a = 0; a < acts.size(); ++a) {
    md << "| " << activation_label(acts[a]) << " |";
    for (std::size_t c = 0; c < configs.size(); ++c) {
      double best = table.mean(c, 0);
      for (std::size_t k = 1; k < acts.size(); ++k) best = std::max(best, table.mean(c, k));
      md << ' ' << display(table.mean(c, a)) << (table.mean(c, a) == best ? "*" : "") << " |";
    }
    md << ' ' << (report.scores[a] ? std::to_string(*report.scores[a]) : "-") << " |\n";
  }
  md << "\n`*` marks the best mean per configuration. Score counts the configurations on which "
        "an activation strictly beats the baseline.\n\n";

  md << "## Fractional rank\n\n";
  md << "| Activation |";
  for (const auto& c : configs) md << ' ' << c << " |";
  md << " Mean rank |\n|---|";
  for (std::size_t c = 0; c < configs.size(); ++c) md << "---:|";
  md << "---:|\n";
  for (std::size_t a = 0; a < acts.size(); ++a) {
    md << "| " << activation_label(acts[a]) << " |";
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const double r = report.ranks[c][a];
      md << ' ' << (r == std::floor(r) ? fixed(r, 0) : fixed(r, 1)) << " |";
    }
    md << ' ' << display(report.mean_ranks[a]) << " |\n";
  }
  md << "\nRank 1 is the highest accuracy; lower mean rank is better.\n";

  if (report.focus && !report.improvements.empty()) {
    const auto f = *table.activation_index_of(*report.focus);
    const auto b = *table.activation_index_of(report.baseline);
    md << "\n## Relative improvement of " << activation_label(*report.focus) << " over "
       << activation_label(report.baseline) << "\n\n";
    md << "| Config | " << activation_label(*report.focus) << " | "
       << activation_label(report.baseline) << " | Improvement (%) |\n|---|---:|---:|---:|\n";
    for (std::size_t c = 0; c < configs.size(); ++c) {
      md << "| " << configs[c] << " | " << display(table.mean(c, f)) << " | "
         << display(table.mean(c, b)) << " | " << display(report.improvements[c]) << " |\n";
    }
  }
  return md.str();
}

std::vector<std::filesystem::path> emit_report(const ResultTable& table, const RankReport& report,
                                               const std::filesystem::path& out_dir) {
  if (table.empty()) throw DomainError("emit_report: refusing to write an empty table");
  static_cast<void>(table.run_count());
  const std::string raw = render_raw_csv(table);
  const std::string summary = render_summary_csv(table);
  const std::string markdown = render_markdown(table, report);
  bool has_curves = false;
  for (std::size_t c = 0; c < table.configs().size(); ++c)
    for (std::size_t a = 0; a < table.activations().size(); ++a)
      for (const auto& r : table.runs(c, a)) has_curves = has_curves || !r.curve.empty();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written = {out_dir / "raw.csv", out_dir / "summary.csv",
                                                out_dir / "report.md"};
  write_file(written[0], raw);
  write_file(written[1], summary);
  write_file(written[2], markdown);
  if (has_curves) {
    written.push_back(out_dir / "curves.csv");
    write_file(written.back(), render_curves_csv(table));
  }
  return written;
}

ResultTable read_accuracy_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_csv_line(line);
  }
  if (header.size() < 2 || header[0] != "activation") {
    throw FormatError("accuracy CSV line " + std::to_string(line_no) +
                      ": header must be 'activation,<config1>,...'");
  }
  const std::vector<std::string> configs(header.begin() + 1, header.end());

  std::vector<ActivationKind> acts;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = "accuracy CSV line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw FormatError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    std::string name = fields[0];
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto kind = parse_activation(name);
    if (!kind) throw FormatError(where + ": unknown activation '" + fields[0] + "'");
    if (std::find(acts.begin(), acts.end(), *kind) != acts.end()) {
      throw FormatError(where + ": duplicate activation '" + fields[0] + "'");
    }
    std::vector<double> values;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw FormatError(where + ": column '" + configs[i - 1] + "' is not a number: '" +
                          fields[i] + "'");
      }
    }
    acts.push_back(*kind);
    rows.push_back(std::move(values));
  }
  if (acts.empty()) throw FormatError("accuracy CSV has no activation rows");

  ResultTable table(configs, acts);
  for (std::size_t a = 0; a < acts.size(); ++a) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      table.add(c, a, RunRecord{0, std::nullopt, rows[a][c], {}});
    }
  }
  return table.canonical();
}

ResultTable read_accuracy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_accuracy_csv(in);
}

}  // namespace afbench

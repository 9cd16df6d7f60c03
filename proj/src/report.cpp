#include "elight/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace elight {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const nlohmann::json& node, std::string& out, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (node.type()) {
    case nlohmann::json::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = node.begin(); it != node.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : node) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        emit(item, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(node.get<double>());
      return;
    default:
      out += node.dump();
      return;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& doc) {
  std::string out;
  emit(doc, out, 0);
  out += "\n";
  return out;
}

nlohmann::json stats_to_json(const WriteStats& stats) {
  return {
      {"total_writes", stats.total_writes},
      {"max_writes", stats.max_cell_writes},
      {"writes_a_to_c", stats.writes_a_to_c},
      {"writes_c_to_a", stats.writes_c_to_a},
      {"energy_units", stats.energy_units},
  };
}

namespace {

std::string csv_number(const nlohmann::json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void append_row(std::string& out, const std::string& name, const nlohmann::json& stats) {
  out += csv_escape(name);
  for (const char* field :
       {"total_writes", "max_writes", "writes_a_to_c", "writes_c_to_a", "energy_units"}) {
    out += ',';
    out += csv_number(stats.at(field));
  }
  out += '\n';
}

}  // namespace

std::string report_to_csv(const nlohmann::json& report) {
  if (!report.contains("layers") || !report.contains("totals"))
    throw std::runtime_error("report is missing layers or totals");
  std::string out = "layer,total_writes,max_writes,writes_a_to_c,writes_c_to_a,energy_units\n";
  for (const auto& layer : report.at("layers")) append_row(out, layer.at("name").get<std::string>(), layer);
  append_row(out, "total", report.at("totals"));
  return out;
}

}  // namespace elight

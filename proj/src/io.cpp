#include "arcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arcs
{
namespace
{
std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const nlohmann::json & j, std::string & out, int indent)
{
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric rows stay on one line
      bool flat = j.size() <= 8;
      for (const auto & v : j) flat = flat && v.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isnan(v)) out += "\"nan\"";
      else if (std::isinf(v)) out += v > 0 ? "\"inf\"" : "\"-inf\"";
      else out += fmt(v);
      return;
    }
    default: out += j.dump();
  }
}
}  // namespace

std::string dump_json(const nlohmann::json & j)
{
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

std::string make_csv(const std::vector<std::string> & header, const std::vector<std::vector<double>> & rows)
{
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto & r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + fmt(r[i]);
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path & path, std::vector<std::string> * header)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      if (header) *header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto & c : cells) {
      char * end = nullptr;
      double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str()) throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": not a number: " + c);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_atomic(const std::filesystem::path & path, const std::string & content)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path output_dir(const std::string & requested)
{
  const char * env = std::getenv(kOutDirEnv);
  std::filesystem::path dir = (env && *env) ? std::filesystem::path(env) : std::filesystem::path(requested);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace arcs

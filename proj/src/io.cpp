#include "slgeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace slgeo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_stack_.empty()) {
    if (!first_stack_.back()) out_ += ",";
    first_stack_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += "{";
  first_stack_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  first_stack_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& name) {
  if (!name.empty()) key(name);
  separator();
  out_ += "[";
  first_stack_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  first_stack_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separator();
  out_ += "\"" + name + "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  out_ += "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += "\"";
  return *this;
}

JsonWriter& JsonWriter::number_array(const std::string& name,
                                     const std::vector<double>& v) {
  begin_array(name);
  for (double x : v) value(x);
  return end_array();
}

void JsonWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("JsonWriter: cannot open " + path);
  out << out_ << "\n";
}

void save_cloud_csv(const SampleCloud& cloud, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("save_cloud_csv: cannot open " + path);
  const int m = cloud.points.empty() ? 3 : static_cast<int>(cloud.points.front().size());
  for (int k = 0; k < m; ++k)
    out << "re" << (k + 1) << ",im" << (k + 1) << (k + 1 == m ? "\n" : ",");
  for (const auto& p : cloud.points) {
    for (int k = 0; k < m; ++k)
      out << format_double(p(k).real()) << "," << format_double(p(k).imag())
          << (k + 1 == m ? "\n" : ",");
  }
}

std::vector<ComplexPoint> load_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_cloud_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("load_cloud_csv: empty file");
  std::vector<ComplexPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() % 2 != 0) throw Error("load_cloud_csv: odd column count");
    ComplexPoint p(vals.size() / 2);
    for (size_t k = 0; k < vals.size() / 2; ++k)
      p(static_cast<int>(k)) = Complex(vals[2 * k], vals[2 * k + 1]);
    points.push_back(std::move(p));
  }
  return points;
}

void save_potential_csv(const PotentialField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("save_potential_csv: cannot open " + path);
  out << "x,y,f\n";
  for (size_t k = 0; k < field.mesh->nodes.size(); ++k)
    out << format_double(field.mesh->nodes[k](0)) << ","
        << format_double(field.mesh->nodes[k](1)) << "," << format_double(field.f(k))
        << "\n";
}

void save_uv_csv(const UVField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("save_uv_csv: cannot open " + path);
  out << "x,y,u,v\n";
  for (size_t k = 0; k < field.mesh->nodes.size(); ++k)
    out << format_double(field.mesh->nodes[k](0)) << ","
        << format_double(field.mesh->nodes[k](1)) << "," << format_double(field.u(k))
        << "," << format_double(field.v(k)) << "\n";
}

}  // namespace slgeo

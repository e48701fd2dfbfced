#pragma once

#include <string>
#include <vector>

#include "slgeo/families.hpp"
#include "slgeo/u1pde.hpp"

namespace slgeo {

// Deterministic JSON writer for reports: insertion-ordered keys, floating
// point rendered with 17 significant digits, so identical runs produce
// byte-identical files.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& field(const std::string& name, double v) { return key(name).value(v); }
  JsonWriter& field(const std::string& name, int v) { return key(name).value(v); }
  JsonWriter& field(const std::string& name, bool v) { return key(name).value(v); }
  JsonWriter& field(const std::string& name, const std::string& v) {
    return key(name).value(v);
  }
  JsonWriter& field(const std::string& name, const char* v) {
    return key(name).value(std::string(v));
  }
  JsonWriter& number_array(const std::string& name, const std::vector<double>& v);

  std::string str() const { return out_; }
  void save(const std::string& path) const;

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_stack_;
  bool pending_key_ = false;
};

std::string format_double(double v);  // fixed 17-significant-digit rendering

// Point clouds: header re1,im1,...,rem,imm, one row per point.
void save_cloud_csv(const SampleCloud& cloud, const std::string& path);
std::vector<ComplexPoint> load_cloud_csv(const std::string& path);

// Scalar grids: x,y,f rows. The two-field variant writes x,y,u,v.
void save_potential_csv(const PotentialField& field, const std::string& path);
void save_uv_csv(const UVField& field, const std::string& path);

}  // namespace slgeo

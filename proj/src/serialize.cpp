#include "cubemax/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cubemax/grid_io.hpp"

namespace cubemax {

namespace {

void write_string(std::ostringstream& os, const std::string& s) { os << Json(s).dump(); }

void dump_rec(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(std::size_t(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(std::size_t(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        dump_rec(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        dump_rec(os, v, indent, depth + 1);
      }
      os << nl << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_double(v);
      else
        write_string(os, format_double(v));
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump17(const Json& j, int indent) {
  std::ostringstream os;
  dump_rec(os, j, indent, 0);
  return os.str();
}

double json_number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw Error(Errc::io_error, "not a number: " + s);
  }
  return j.get<double>();
}

Json cube_to_json(const GridCube& q, int dim) {
  Json a = Json::array();
  for (int k = 0; k < dim; ++k) a.push_back(q.anchor[k]);
  return Json{{"anchor", a}, {"side", q.side}};
}

GridCube cube_from_json(const Json& j) {
  GridCube q;
  const auto& a = j.at("anchor");
  if (a.size() > 3) throw Error(Errc::io_error, "cube anchor has more than 3 coordinates");
  for (std::size_t k = 0; k < a.size(); ++k) q.anchor[k] = a[k].get<int>();
  q.side = j.at("side").get<int>();
  return q;
}

Json to_json(const CubeFamily& fam) {
  Json cubes = Json::array();
  for (const auto& q : fam.cubes()) cubes.push_back(cube_to_json(q, fam.dim()));
  return Json{{"dims", fam.shape().dims()}, {"h", fam.h()}, {"cubes", cubes}};
}

CubeFamily family_from_json(const Json& j) {
  try {
    const auto dims = j.at("dims").get<std::vector<int>>();
    std::vector<GridCube> cubes;
    for (const auto& c : j.at("cubes")) cubes.push_back(cube_from_json(c));
    return CubeFamily(GridShape(std::span<const int>(dims)), json_number(j.at("h")), cubes);
  } catch (const Json::exception& e) {
    throw Error(Errc::io_error, std::string("bad cube family JSON: ") + e.what());
  }
}

Json to_json(const SparseFamily& s, int dim) {
  Json cubes = Json::array();
  for (std::size_t k = 0; k < s.cubes.size(); ++k) {
    Json c = cube_to_json(s.cubes[k], dim);
    c["average"] = s.averages[k];
    c["lambda"] = s.lambdas[k];
    cubes.push_back(c);
  }
  return Json{{"cubes", cubes}, {"rhs_sum", s.rhs_sum}, {"iterations", s.iterations}};
}

SparseFamily sparse_from_json(const Json& j) {
  SparseFamily s;
  for (const auto& c : j.at("cubes")) {
    s.cubes.push_back(cube_from_json(c));
    s.averages.push_back(json_number(c.at("average")));
    s.lambdas.push_back(json_number(c.at("lambda")));
  }
  s.rhs_sum = json_number(j.at("rhs_sum"));
  s.iterations = j.at("iterations").get<std::size_t>();
  return s;
}

Json to_json(const OverlapFamily& o, int dim) {
  Json cubes = Json::array();
  for (const auto& q : o.cubes) cubes.push_back(cube_to_json(q, dim));
  return Json{{"cubes", cubes},   {"eps", o.eps}, {"C", o.C},
              {"C1", o.C1},       {"C2", o.C2},   {"reduced_size", o.reduced_size}};
}

OverlapFamily overlap_from_json(const Json& j) {
  OverlapFamily o;
  for (const auto& c : j.at("cubes")) o.cubes.push_back(cube_from_json(c));
  o.eps = json_number(j.at("eps"));
  o.C = j.at("C").get<int>();
  o.C1 = json_number(j.at("C1"));
  o.C2 = json_number(j.at("C2"));
  o.reduced_size = j.at("reduced_size").get<std::size_t>();
  return o;
}

Json to_json(const TheoremReport& r, bool rows) {
  Json j{{"lhs", r.lhs},
         {"rhs", r.rhs},
         {"ratio", r.ratio},
         {"family_size", r.family_size},
         {"reduced_size", r.reduced_size},
         {"breakpoints", r.breakpoints},
         {"high_density_integral", r.high_density_integral},
         {"q2_integral", r.q2_integral},
         {"high_density_rhs", r.high_density_rhs},
         {"high_density_ratio_max", r.high_density_ratio_max},
         {"decomposition_failures", r.decomposition_failures},
         {"sparse_size", r.sparse_size},
         {"sparse_rhs_sum", r.sparse_rhs_sum},
         {"todyadic_ratio", r.todyadic_ratio},
         {"massabove_ratio_max", r.massabove_ratio_max},
         {"sparse_mass_ratio_max", r.sparse_mass_ratio_max},
         {"sparse_mass_failures", r.sparse_mass_failures},
         {"eps", r.eps},
         {"C_max", r.C_max},
         {"C1_max", r.C1_max},
         {"C2_max", r.C2_max},
         {"massbelow_max", r.massbelow_max},
         {"volume_to_boundary_min", r.volume_to_boundary_min},
         {"disjoint_failures", r.disjoint_failures},
         {"level_ratio_max", r.level_ratio_max},
         {"mass_above_integral", r.mass_above_integral},
         {"sparse_boundary_integral", r.sparse_boundary_integral},
         {"violations", r.violations}};
  if (rows) {
    Json t = Json::array();
    for (const auto& w : r.rows)
      t.push_back(Json{{"lam", w.lam},       {"weight", w.weight}, {"lhs", w.lhs},       {"rhs", w.rhs},
                       {"term1", w.term1},   {"term2", w.term2},   {"hd_rhs", w.hd_rhs}, {"q0", w.n0},
                       {"q1", w.n1},         {"q2", w.n2},         {"S", w.n_s},         {"D", w.n_d},
                       {"F", w.n_f},         {"C", w.C},           {"disjoint_lhs", w.disjoint_lhs},
                       {"disjoint_rhs", w.disjoint_rhs},           {"level_lhs", w.level_lhs}});
    j["rows"] = t;
  }
  return j;
}

}  // namespace cubemax

#include "krontrace/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "krontrace/errors.hpp"

namespace kt {

using nlohmann::json;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += (char)ch;
        }
    }
  }
  return out;
}

std::string json_num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quoted(const std::string& s) { return "\"" + json_escape(s) + "\""; }

// readers: every object is checked against its allowed key set

void check_keys(const json& obj, const char* what,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw DataError("unknown field '" + it.key() + "' in " + what);
  }
}

const json& require(const json& obj, const char* key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DataError(std::string("missing field '") + key + "' in " + what);
  return *it;
}

double as_number(const json& v, const char* what) {
  if (!v.is_number())
    throw DataError(std::string(what) + " must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const char* what) {
  if (!v.is_string())
    throw DataError(std::string(what) + " must be a string");
  return v.get<std::string>();
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw DataError(std::string("malformed JSON in ") + what);
  return j;
}

}  // namespace

std::string network_to_json(const ResistanceNetwork& net) {
  std::ostringstream os;
  os << "{\n  \"vertices\": [\n";
  for (int v = 0; v < net.n; ++v) {
    os << "    {\"id\": " << quoted(net.ids[v]) << ", \"m0\": "
       << json_num(net.m0[v]) << ", \"boundary\": "
       << (net.is_boundary[v] ? "true" : "false");
    if (!net.coords.empty() && !net.coords[v].empty()) {
      os << ", \"coord\": [";
      for (size_t k = 0; k < net.coords[v].size(); ++k)
        os << (k ? ", " : "") << json_num(net.coords[v][k]);
      os << "]";
    }
    os << "}" << (v + 1 < net.n ? "," : "") << "\n";
  }
  os << "  ],\n  \"edges\": [\n";
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const Edge& ed = net.edges[e];
    os << "    {\"u\": " << quoted(net.ids[ed.u]) << ", \"v\": "
       << quoted(net.ids[ed.v]) << ", \"c\": " << json_num(ed.c) << "}"
       << (e + 1 < net.edges.size() ? "," : "") << "\n";
  }
  os << "  ]";
  bool ghost = false;
  for (double g : net.ghost_c)
    if (g > 0) ghost = true;
  if (ghost) {
    os << ",\n  \"ghost_edges\": [\n";
    bool first = true;
    for (int v = 0; v < net.n; ++v) {
      if (net.ghost_c[v] <= 0) continue;
      if (!first) os << ",\n";
      first = false;
      os << "    {\"u\": " << quoted(net.ids[v]) << ", \"c\": "
         << json_num(net.ghost_c[v]) << "}";
    }
    os << "\n  ]";
  }
  os << "\n}\n";
  return os.str();
}

ResistanceNetwork network_from_json(const std::string& text) {
  json j = parse(text, "network");
  if (!j.is_object()) throw DataError("network JSON must be an object");
  check_keys(j, "network", {"vertices", "edges", "ghost_edges"});

  const json& jv = require(j, "vertices", "network");
  const json& je = require(j, "edges", "network");
  if (!jv.is_array() || !je.is_array())
    throw DataError("network vertices/edges must be arrays");

  std::vector<std::string> ids;
  std::vector<double> m0;
  std::vector<char> is_boundary;
  std::vector<std::vector<double>> coords;
  bool any_coord = false;
  std::unordered_map<std::string, int> index;
  for (const json& v : jv) {
    if (!v.is_object()) throw DataError("vertex entry must be an object");
    check_keys(v, "vertex", {"id", "m0", "boundary", "coord"});
    std::string id = as_string(require(v, "id", "vertex"), "vertex id");
    if (!index.emplace(id, (int)ids.size()).second)
      throw DataError("duplicate vertex id '" + id + "'");
    ids.push_back(id);
    m0.push_back(as_number(require(v, "m0", "vertex"), "vertex m0"));
    const json& b = require(v, "boundary", "vertex");
    if (!b.is_boolean()) throw DataError("vertex boundary must be a bool");
    is_boundary.push_back(b.get<bool>() ? 1 : 0);
    std::vector<double> xy;
    if (auto it = v.find("coord"); it != v.end()) {
      if (!it->is_array()) throw DataError("vertex coord must be an array");
      for (const json& x : *it) xy.push_back(as_number(x, "coord entry"));
      any_coord = true;
    }
    coords.push_back(std::move(xy));
  }

  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end())
      throw DataError("edge references unknown vertex '" + id + "'");
    return it->second;
  };

  std::vector<Edge> edges;
  for (const json& e : je) {
    if (!e.is_object()) throw DataError("edge entry must be an object");
    check_keys(e, "edge", {"u", "v", "c"});
    int u = lookup(as_string(require(e, "u", "edge"), "edge u"));
    int v = lookup(as_string(require(e, "v", "edge"), "edge v"));
    double c = as_number(require(e, "c", "edge"), "edge c");
    edges.push_back({u, v, c});
  }

  std::vector<double> ghost_c(ids.size(), 0.0);
  if (auto it = j.find("ghost_edges"); it != j.end()) {
    if (!it->is_array()) throw DataError("ghost_edges must be an array");
    for (const json& g : *it) {
      if (!g.is_object()) throw DataError("ghost edge entry must be an object");
      check_keys(g, "ghost edge", {"u", "c"});
      int u = lookup(as_string(require(g, "u", "ghost edge"), "ghost u"));
      ghost_c[u] += as_number(require(g, "c", "ghost edge"), "ghost c");
    }
  }

  ResistanceNetwork net = build_network(std::move(ids), std::move(edges),
                                        std::move(m0), std::move(is_boundary),
                                        std::move(ghost_c));
  if (any_coord) net.coords = std::move(coords);
  return net;
}

std::string geometry_to_json(const GeneratedDomain& dom) {
  const BoundaryGeometry& g = dom.geom;
  std::ostringstream os;
  os << "{\n  \"rho_boundary\": [\n";
  for (int i = 0; i < g.b; ++i) {
    os << "    [";
    for (int k = 0; k < g.b; ++k)
      os << (k ? ", " : "") << json_num(g.rho(i, k));
    os << "]" << (i + 1 < g.b ? "," : "") << "\n";
  }
  os << "  ],\n  \"d_D\": {\n";
  for (int v = 0; v < dom.net.n; ++v)
    os << "    " << quoted(dom.net.ids[v]) << ": " << json_num(g.d_D[v])
       << (v + 1 < dom.net.n ? "," : "") << "\n";
  os << "  },\n  \"labels\": {";
  if (!dom.boundary_words.empty()) {
    os << "\n";
    for (int i = 0; i < g.b; ++i)
      os << "    " << quoted(dom.net.ids[g.boundary[i]]) << ": "
         << quoted(dom.boundary_words[i]) << (i + 1 < g.b ? "," : "") << "\n";
    os << "  ";
  }
  os << "}\n}\n";
  return os.str();
}

std::string trace_to_json(const TraceForm& tf) {
  std::ostringstream os;
  os << "{\n  \"boundary\": [";
  for (int i = 0; i < tf.b; ++i)
    os << (i ? ", " : "") << quoted(tf.ids[i]);
  os << "],\n  \"jumps\": [\n";
  bool first = true;
  for (int i = 0; i < tf.b; ++i) {
    for (int k = i + 1; k < tf.b; ++k) {
      double c = tf.chat(i, k);
      if (c <= 0) continue;
      if (!first) os << ",\n";
      first = false;
      os << "    {\"x\": " << quoted(tf.ids[i]) << ", \"y\": "
         << quoted(tf.ids[k]) << ", \"c\": " << json_num(c) << "}";
    }
  }
  os << "\n  ],\n  \"kappa\": {\n";
  for (int i = 0; i < tf.b; ++i)
    os << "    " << quoted(tf.ids[i]) << ": " << json_num(tf.kappa[i])
       << (i + 1 < tf.b ? "," : "") << "\n";
  os << "  },\n  \"measure\": {";
  if (!tf.measure.mass.empty()) {
    os << "\n";
    for (int i = 0; i < tf.b; ++i)
      os << "    " << quoted(tf.ids[i]) << ": "
         << json_num(tf.measure.mass[i]) << (i + 1 < tf.b ? "," : "") << "\n";
    os << "  ";
  }
  os << "}\n}\n";
  return os.str();
}

TraceForm trace_from_json(const std::string& text) {
  json j = parse(text, "trace");
  if (!j.is_object()) throw DataError("trace JSON must be an object");
  check_keys(j, "trace", {"boundary", "jumps", "kappa", "measure"});

  const json& jb = require(j, "boundary", "trace");
  if (!jb.is_array()) throw DataError("trace boundary must be an array");
  TraceForm tf;
  std::unordered_map<std::string, int> pos;
  for (const json& v : jb) {
    std::string id = as_string(v, "boundary id");
    if (!pos.emplace(id, tf.b).second)
      throw DataError("duplicate boundary id '" + id + "'");
    tf.ids.push_back(id);
    tf.boundary.push_back(tf.b);
    ++tf.b;
  }
  if (tf.b == 0) throw DataError("trace boundary is empty");

  auto lookup = [&](const std::string& id) {
    auto it = pos.find(id);
    if (it == pos.end())
      throw DataError("trace references unknown boundary id '" + id + "'");
    return it->second;
  };

  tf.chat = Eigen::MatrixXd::Zero(tf.b, tf.b);
  const json& jj = require(j, "jumps", "trace");
  if (!jj.is_array()) throw DataError("trace jumps must be an array");
  for (const json& e : jj) {
    if (!e.is_object()) throw DataError("jump entry must be an object");
    check_keys(e, "jump", {"x", "y", "c"});
    int x = lookup(as_string(require(e, "x", "jump"), "jump x"));
    int y = lookup(as_string(require(e, "y", "jump"), "jump y"));
    double c = as_number(require(e, "c", "jump"), "jump c");
    if (x == y) throw DataError("jump connects a vertex to itself");
    if (c <= 0) throw DataError("jump conductance must be positive");
    if (tf.chat(x, y) != 0) throw DataError("duplicate jump pair");
    tf.chat(x, y) = tf.chat(y, x) = c;
  }

  tf.kappa.assign(tf.b, 0.0);
  const json& jk = require(j, "kappa", "trace");
  if (!jk.is_object()) throw DataError("trace kappa must be an object");
  for (auto it = jk.begin(); it != jk.end(); ++it)
    tf.kappa[lookup(it.key())] = as_number(it.value(), "kappa value");

  const json& jm = require(j, "measure", "trace");
  if (!jm.is_object()) throw DataError("trace measure must be an object");
  if (!jm.empty()) {
    tf.measure.mass.assign(tf.b, 0.0);
    for (auto it = jm.begin(); it != jm.end(); ++it)
      tf.measure.mass[lookup(it.key())] = as_number(it.value(), "measure value");
  }

  for (int i = 0; i < tf.b; ++i) {
    double d = tf.kappa[i];
    for (int k = 0; k < tf.b; ++k) d += tf.chat(i, k);
    tf.diag_scale = std::max(tf.diag_scale, d);
  }
  tf.source_has_ghost = tf.has_killing();
  return tf;
}

std::string cover_to_json(const GeneratedDomain& dom, const WhitneyCover& cov) {
  std::ostringstream os;
  os << "{\n  \"epsilon\": " << json_num(cov.epsilon) << ",\n  \"floor\": "
     << json_num(cov.floor_dD) << ",\n  \"centers\": [\n";
  for (size_t i = 0; i < cov.centers.size(); ++i) {
    os << "    {\"id\": " << quoted(dom.net.ids[cov.centers[i]])
       << ", \"r\": " << json_num(cov.radii[i]) << ", \"patch\": [";
    for (size_t k = 0; k < cov.patches[i].size(); ++k) {
      int bp = cov.patches[i][k];
      os << (k ? ", " : "") << quoted(dom.net.ids[dom.geom.boundary[bp]]);
    }
    os << "]}" << (i + 1 < cov.centers.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string report_to_json(const Report& rep) {
  std::ostringstream os;
  os << "{\n  \"name\": " << quoted(rep.name) << ",\n  \"samples\": [\n";
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const ReportSample& s = rep.samples[i];
    os << "    {\"label\": " << quoted(s.label) << ", \"x\": "
       << json_num(s.x) << ", \"lhs\": " << json_num(s.lhs) << ", \"rhs\": "
       << json_num(s.rhs) << ", \"value\": " << json_num(s.value) << "}"
       << (i + 1 < rep.samples.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"min\": " << json_num(rep.min_value) << ",\n  \"max\": "
     << json_num(rep.max_value) << ",\n  \"ratio\": " << json_num(rep.ratio);
  if (rep.has_fit) {
    os << ",\n  \"fit\": {\"exponent\": " << json_num(rep.fit.exponent)
       << ", \"constant\": " << json_num(rep.fit.constant)
       << ", \"residual\": " << json_num(rep.fit.residual)
       << ", \"points\": " << rep.fit.points << "}";
  }
  os << ",\n  \"pass\": " << (rep.pass ? "true" : "false");
  if (!rep.note.empty()) os << ",\n  \"note\": " << quoted(rep.note);
  os << "\n}\n";
  return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
  bool need = s.find_first_of(",\"\r\n") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char ch : s) {
    out += ch;
    if (ch == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

std::string report_to_csv(const Report& rep) {
  std::ostringstream os;
  os << "name,label,x,lhs,rhs,value\r\n";
  for (const ReportSample& s : rep.samples)
    os << csv_field(rep.name) << "," << csv_field(s.label) << ","
       << json_num(s.x) << "," << json_num(s.lhs) << "," << json_num(s.rhs)
       << "," << json_num(s.value) << "\r\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), (std::streamsize)content.size());
    out.flush();
    if (!out) throw DataError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot finalize '" + path + "'");
  }
}

}  // namespace kt

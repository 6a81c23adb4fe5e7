#pragma once

#include <treebench/model.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace treebench {

using Json = nlohmann::json;  // std::map-backed: object keys serialize sorted

inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline const Json& require(const Json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string(ctx) + ": missing field '" + key + "'");
  return *it;
}

inline std::string req_str(const Json& j, const char* key, const char* ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_string()) throw std::invalid_argument(std::string(ctx) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t req_label(const Json& j, const char* key, const char* ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number_integer())
    throw std::invalid_argument(std::string(ctx) + ": '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline OrderValue order_from_json(const Json& j, const char* ctx) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return OrderValue::inf();
    return OrderValue::finite(big_from_json(j, ctx));
  }
  return OrderValue::finite(big_from_json(j, ctx));
}

inline Json order_to_json(const OrderValue& o) {
  if (o.infinite) return "inf";
  return big_to_json(o.value);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gbs

inline Json to_json(const GbsGraph& g, bool with_kind = true) {
  Json j;
  if (with_kind) j["kind"] = "gbs";
  j["base"] = g.base;
  j["vertices"] = g.vertices;
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    Json je;
    je["id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    je["label_from"] = e.label_from;
    je["label_to"] = e.label_to;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j;
}

inline GbsGraph gbs_from_json(const Json& j) {
  GbsGraph g;
  g.base = detail::req_str(j, "base", "gbs");
  for (const auto& v : detail::require(j, "vertices", "gbs")) {
    if (!v.is_string()) throw std::invalid_argument("gbs: vertex ids must be strings");
    g.vertices.push_back(v.get<std::string>());
  }
  for (const auto& je : detail::require(j, "edges", "gbs")) {
    GbsEdge e;
    e.id = detail::req_str(je, "id", "gbs edge");
    e.from = detail::req_str(je, "from", "gbs edge");
    e.to = detail::req_str(je, "to", "gbs edge");
    e.label_from = detail::req_label(je, "label_from", "gbs edge");
    e.label_to = detail::req_label(je, "label_to", "gbs edge");
    g.edges.push_back(std::move(e));
  }
  return g;
}

// ---------------------------------------------------------------------------
// word

inline Json to_json(const PathWord& w, bool with_kind = true) {
  Json j;
  if (with_kind) j["kind"] = "word";
  j["base_exp"] = big_to_json(w.base_exp);
  Json syl = Json::array();
  for (const auto& s : w.syllables) {
    Json js;
    js["edge"] = s.edge;
    js["dir"] = s.dir;
    js["exp"] = big_to_json(s.exp);
    syl.push_back(std::move(js));
  }
  j["syllables"] = std::move(syl);
  return j;
}

inline PathWord word_from_json(const Json& j) {
  PathWord w;
  w.base_exp = big_from_json(detail::require(j, "base_exp", "word"), "word base_exp");
  for (const auto& js : detail::require(j, "syllables", "word")) {
    Syllable s;
    s.edge = detail::req_str(js, "edge", "word syllable");
    auto d = detail::req_label(js, "dir", "word syllable");
    if (d != 1 && d != -1) throw std::invalid_argument("word syllable: dir must be +1 or -1");
    s.dir = static_cast<int>(d);
    s.exp = big_from_json(detail::require(js, "exp", "word syllable"), "word syllable exp");
    w.syllables.push_back(std::move(s));
  }
  return w;
}

// ---------------------------------------------------------------------------
// moves / handle

inline Json to_json(const Move& m) {
  Json j;
  switch (m.kind) {
    case MoveKind::Collapse: {
      j["move"] = "collapse";
      j["dropped"] = m.dropped;
      break;
    }
    case MoveKind::Expansion: {
      j["move"] = "expansion";
      j["vertex"] = m.vertex;
      j["new_vertex"] = m.new_vertex;
      j["new_edge"] = m.new_edge;
      j["index"] = m.index;
      Json moved = Json::array();
      for (const auto& me : m.moved) {
        Json jm;
        jm["edge"] = me.edge;
        jm["end"] = edge_end_name(me.end);
        moved.push_back(std::move(jm));
      }
      j["moved"] = std::move(moved);
      break;
    }
    case MoveKind::Slide: {
      j["move"] = "slide";
      j["edge"] = m.edge;
      j["end"] = edge_end_name(m.end);
      j["over"] = m.over;
      j["over_end"] = edge_end_name(m.over_end);
      break;
    }
  }
  if (!m.translator.empty()) {
    Json t;
    for (const auto& [gen, word] : m.translator) t[gen] = to_json(word, false);
    j["translator"] = std::move(t);
  }
  return j;
}

inline EdgeEnd edge_end_from_json(const Json& j, const char* ctx) {
  if (!j.is_string()) throw std::invalid_argument(std::string(ctx) + ": end must be a string");
  auto s = j.get<std::string>();
  if (s == "from") return EdgeEnd::From;
  if (s == "to") return EdgeEnd::To;
  throw std::invalid_argument(std::string(ctx) + ": end must be 'from' or 'to'");
}

inline Move move_from_json(const Json& j) {
  Move m;
  auto kind = detail::req_str(j, "move", "move");
  if (kind == "collapse") {
    m.kind = MoveKind::Collapse;
    for (const auto& d : detail::require(j, "dropped", "collapse move")) {
      if (!d.is_string()) throw std::invalid_argument("collapse move: dropped ids must be strings");
      m.dropped.push_back(d.get<std::string>());
    }
  } else if (kind == "expansion") {
    m.kind = MoveKind::Expansion;
    m.vertex = detail::req_str(j, "vertex", "expansion move");
    m.new_vertex = detail::req_str(j, "new_vertex", "expansion move");
    m.new_edge = detail::req_str(j, "new_edge", "expansion move");
    m.index = detail::req_label(j, "index", "expansion move");
    if (j.count("moved")) {
      for (const auto& jm : j.at("moved")) {
        MovedEnd me;
        me.edge = detail::req_str(jm, "edge", "expansion moved end");
        me.end = edge_end_from_json(detail::require(jm, "end", "expansion moved end"),
                                    "expansion moved end");
        m.moved.push_back(std::move(me));
      }
    }
  } else if (kind == "slide") {
    m.kind = MoveKind::Slide;
    m.edge = detail::req_str(j, "edge", "slide move");
    m.end = edge_end_from_json(detail::require(j, "end", "slide move"), "slide move");
    m.over = detail::req_str(j, "over", "slide move");
    m.over_end = edge_end_from_json(detail::require(j, "over_end", "slide move"), "slide move");
  } else {
    throw std::invalid_argument("unknown move kind: " + kind);
  }
  if (j.count("translator")) {
    for (const auto& [gen, jw] : j.at("translator").items())
      m.translator[gen] = word_from_json(jw);
  }
  return m;
}

inline Json to_json(const TreeHandle& h, bool with_kind = true) {
  Json j;
  if (with_kind) j["kind"] = "handle";
  j["master"] = to_json(h.master);
  j["kept"] = std::vector<std::string>(h.kept.begin(), h.kept.end());
  Json lin = Json::array();
  for (const auto& m : h.lineage) lin.push_back(to_json(m));
  j["lineage"] = std::move(lin);
  return j;
}

inline TreeHandle handle_from_json(const Json& j) {
  TreeHandle h;
  h.master = gbs_from_json(detail::require(j, "master", "handle"));
  for (const auto& k : detail::require(j, "kept", "handle")) {
    if (!k.is_string()) throw std::invalid_argument("handle: kept ids must be strings");
    h.kept.insert(k.get<std::string>());
  }
  if (j.count("lineage"))
    for (const auto& jm : j.at("lineage")) h.lineage.push_back(move_from_json(jm));
  return h;
}

// ---------------------------------------------------------------------------
// table

inline Json to_json(const SubgroupTable& t, bool with_kind = true) {
  Json j;
  if (with_kind) j["kind"] = "table";
  Json symbols = Json::array();
  for (const auto& s : t.symbols) {
    Json js;
    js["name"] = s.name;
    js["order"] = detail::order_to_json(s.order);
    js["in_A"] = s.in_a;
    if (s.vc_kernel) js["vc_kernel"] = big_to_json(*s.vc_kernel);
    symbols.push_back(std::move(js));
  }
  j["symbols"] = std::move(symbols);
  Json incl = Json::array();
  for (const auto& i : t.inclusions) {
    Json ji;
    ji["sub"] = i.sub;
    ji["super"] = i.super;
    if (i.index) ji["index"] = big_to_json(*i.index);
    incl.push_back(std::move(ji));
  }
  j["inclusions"] = std::move(incl);
  Json classes = Json::array();
  for (const auto& c : t.classes) {
    Json jc;
    jc["id"] = c.id;
    jc["members"] = c.members;
    jc["stab"] = c.stab;
    classes.push_back(std::move(jc));
  }
  j["classes"] = std::move(classes);
  Json inter = Json::array();
  for (const auto& e : t.intersections) {
    Json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["order"] = detail::order_to_json(e.order);
    if (e.symbol) je["symbol"] = *e.symbol;
    inter.push_back(std::move(je));
  }
  j["intersections"] = std::move(inter);
  return j;
}

inline SubgroupTable table_from_json(const Json& j) {
  SubgroupTable t;
  for (const auto& js : detail::require(j, "symbols", "table")) {
    SymbolDecl s;
    s.name = detail::req_str(js, "name", "table symbol");
    s.order = detail::order_from_json(detail::require(js, "order", "table symbol"), "symbol order");
    s.in_a = detail::require(js, "in_A", "table symbol").get<bool>();
    if (js.count("vc_kernel")) s.vc_kernel = big_from_json(js.at("vc_kernel"), "vc_kernel");
    t.symbols.push_back(std::move(s));
  }
  if (j.count("inclusions")) {
    for (const auto& ji : j.at("inclusions")) {
      Inclusion i;
      i.sub = detail::req_str(ji, "sub", "table inclusion");
      i.super = detail::req_str(ji, "super", "table inclusion");
      if (ji.count("index")) i.index = big_from_json(ji.at("index"), "inclusion index");
      t.inclusions.push_back(std::move(i));
    }
  }
  if (j.count("classes")) {
    for (const auto& jc : j.at("classes")) {
      EquivClass c;
      c.id = detail::req_str(jc, "id", "table class");
      for (const auto& m : detail::require(jc, "members", "table class"))
        c.members.push_back(m.get<std::string>());
      c.stab = detail::req_str(jc, "stab", "table class");
      t.classes.push_back(std::move(c));
    }
  }
  if (j.count("intersections")) {
    for (const auto& je : j.at("intersections")) {
      IntersectionEntry e;
      e.a = detail::req_str(je, "a", "table intersection");
      e.b = detail::req_str(je, "b", "table intersection");
      e.order = detail::order_from_json(detail::require(je, "order", "table intersection"),
                                        "intersection order");
      if (je.count("symbol")) e.symbol = je.at("symbol").get<std::string>();
      t.intersections.push_back(std::move(e));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// ball

inline Json to_json(const BallTree& b, bool with_kind = true) {
  Json j;
  if (with_kind) j["kind"] = "ball";
  j["center"] = b.center;
  j["interior_radius"] = b.interior_radius;
  Json verts = Json::array();
  for (const auto& v : b.vertices) {
    Json jv;
    jv["id"] = v.id;
    jv["stab"] = v.stab;
    if (v.interior) jv["interior"] = *v.interior;
    verts.push_back(std::move(jv));
  }
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const auto& e : b.edges) {
    Json je;
    je["id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    je["stab"] = e.stab;
    if (e.collapsed) je["collapsed"] = *e.collapsed;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  if (b.table) j["table"] = to_json(*b.table);
  else j["table"] = nullptr;
  if (b.derived) j["derived"] = *b.derived;
  if (!b.layer.empty()) j["layer"] = b.layer;
  return j;
}

inline BallTree ball_from_json(const Json& j) {
  BallTree b;
  b.center = detail::req_str(j, "center", "ball");
  b.interior_radius = detail::req_label(j, "interior_radius", "ball");
  for (const auto& jv : detail::require(j, "vertices", "ball")) {
    BallVertex v;
    v.id = detail::req_str(jv, "id", "ball vertex");
    v.stab = detail::req_str(jv, "stab", "ball vertex");
    if (jv.count("interior")) v.interior = jv.at("interior").get<bool>();
    b.vertices.push_back(std::move(v));
  }
  for (const auto& je : detail::require(j, "edges", "ball")) {
    BallEdge e;
    e.id = detail::req_str(je, "id", "ball edge");
    e.from = detail::req_str(je, "from", "ball edge");
    e.to = detail::req_str(je, "to", "ball edge");
    e.stab = detail::req_str(je, "stab", "ball edge");
    if (je.count("collapsed")) e.collapsed = je.at("collapsed").get<bool>();
    b.edges.push_back(std::move(e));
  }
  if (j.count("table") && !j.at("table").is_null()) b.table = table_from_json(j.at("table"));
  if (j.count("derived")) b.derived = j.at("derived").get<std::string>();
  if (j.count("layer"))
    for (const auto& [k, v] : j.at("layer").items()) b.layer[k] = v.get<int>();
  return b;
}

// ---------------------------------------------------------------------------
// files

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + ex.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << canonical_dump(j);
}

inline std::string document_kind(const Json& j) {
  if (!j.is_object() || !j.count("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("document has no 'kind' tag");
  return j.at("kind").get<std::string>();
}

}  // namespace treebench

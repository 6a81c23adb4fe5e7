#pragma once

#include <treebench/model.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treebench {

/// Query layer over a SubgroupTable: inclusion closure, class membership,
/// intersection lookup.
class TableIndex {
 public:
  explicit TableIndex(const SubgroupTable& t) : table_(&t) {
    for (const auto& s : t.symbols) {
      if (!decl_.emplace(s.name, &s).second)
        throw std::invalid_argument("duplicate symbol: " + s.name);
    }
    for (const auto& i : t.inclusions) {
      check_symbol(i.sub, "inclusion");
      check_symbol(i.super, "inclusion");
      below_[i.super].insert(i.sub);
    }
    // Reflexive-transitive closure; tables are small.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& [super, subs] : below_) {
        std::set<std::string> add;
        for (const auto& s : subs) {
          auto it = below_.find(s);
          if (it == below_.end()) continue;
          for (const auto& deeper : it->second)
            if (!subs.count(deeper)) add.insert(deeper);
        }
        if (!add.empty()) {
          subs.insert(add.begin(), add.end());
          changed = true;
        }
      }
    }
    for (const auto& c : t.classes) {
      for (const auto& m : c.members) {
        check_symbol(m, "class " + c.id);
        if (class_of_.count(m))
          throw std::invalid_argument("symbol in two classes: " + m);
        class_of_[m] = c.id;
      }
      check_symbol(c.stab, "class " + c.id);
      class_stab_[c.id] = c.stab;
    }
    for (const auto& e : t.intersections) {
      check_symbol(e.a, "intersection");
      check_symbol(e.b, "intersection");
      inter_[key(e.a, e.b)] = &e;
    }
  }

  const SubgroupTable& table() const { return *table_; }

  const SymbolDecl& symbol(const std::string& name) const {
    auto it = decl_.find(name);
    if (it == decl_.end()) throw std::invalid_argument("unknown symbol: " + name);
    return *it->second;
  }
  bool has_symbol(const std::string& name) const { return decl_.count(name) != 0; }

  bool includes(const std::string& sub, const std::string& super) const {
    if (sub == super) return true;
    auto it = below_.find(super);
    return it != below_.end() && it->second.count(sub) != 0;
  }

  /// Symbols declared included in `super` (reflexive).
  std::set<std::string> contained_in(const std::string& super) const {
    std::set<std::string> out;
    out.insert(super);
    auto it = below_.find(super);
    if (it != below_.end()) out.insert(it->second.begin(), it->second.end());
    return out;
  }

  bool in_family_e(const std::string& name) const {
    const auto& d = symbol(name);
    return d.order.infinite && d.in_a;
  }

  std::optional<std::string> class_of(const std::string& name) const {
    auto it = class_of_.find(name);
    if (it == class_of_.end()) return std::nullopt;
    return it->second;
  }

  std::string class_stab(const std::string& class_id) const {
    auto it = class_stab_.find(class_id);
    if (it == class_stab_.end())
      throw std::invalid_argument("class without stabilizer: " + class_id);
    return it->second;
  }

  const IntersectionEntry* intersection(const std::string& a, const std::string& b) const {
    auto it = inter_.find(key(a, b));
    return it == inter_.end() ? nullptr : it->second;
  }

  /// Exact order of a symbol.
  OrderValue order_of(const std::string& name) const { return symbol(name).order; }

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  void check_symbol(const std::string& name, const std::string& ctx) const {
    if (!decl_.count(name))
      throw std::invalid_argument(ctx + " references unknown symbol: " + name);
  }

  const SubgroupTable* table_;
  std::map<std::string, const SymbolDecl*> decl_;
  std::map<std::string, std::set<std::string>> below_;
  std::map<std::string, std::string> class_of_;
  std::map<std::string, std::string> class_stab_;
  std::map<std::pair<std::string, std::string>, const IntersectionEntry*> inter_;
};

}  // namespace treebench

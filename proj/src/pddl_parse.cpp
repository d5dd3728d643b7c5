#include <algorithm>
#include <cctype>
#include <set>

#include "aia/pddl.hpp"

namespace aia {
namespace {

struct SExpr {
  bool is_list = false;
  std::string token;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty input");
    SExpr root = read();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected text after top-level expression");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr node;
    node.line = line_;
    node.column = column_;
    char c = text_[pos_];
    if (c == ')') fail("unbalanced ')'");
    if (c == '(') {
      node.is_list = true;
      advance();
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("missing ')'", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      node.token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

[[noreturn]] void fail_at(const SExpr& node, const std::string& message) {
  throw ParseError(message, node.line, node.column);
}

const std::string& expect_token(const SExpr& node, const char* what) {
  if (node.is_list || node.token.empty()) fail_at(node, std::string("expected ") + what);
  return node.token;
}

bool head_is(const SExpr& node, std::string_view head) {
  return node.is_list && !node.items.empty() && !node.items[0].is_list &&
         node.items[0].token == head;
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

std::string expect_name(const SExpr& node, const char* what) {
  const std::string& name = expect_token(node, what);
  if (!is_identifier(name)) fail_at(node, std::string("invalid ") + what + " '" + name + "'");
  if (is_reserved_identifier(name)) fail_at(node, "identifier '" + name + "' uses a reserved namespace");
  return name;
}

// Parses "a b - t c" style typed lists (variables when `variables` is set).
std::vector<std::pair<std::string, std::string>> parse_typed_list(const std::vector<SExpr>& items,
                                                                  std::size_t begin, bool variables) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pending = 0;
  for (std::size_t k = begin; k < items.size(); ++k) {
    const SExpr& item = items[k];
    if (item.is_list) {
      if (head_is(item, "either")) throw UnsupportedFeature("either types");
      fail_at(item, "unexpected list in typed list");
    }
    if (item.token == "-") {
      if (k + 1 >= items.size()) fail_at(item, "missing type after '-'");
      const SExpr& type_node = items[k + 1];
      if (head_is(type_node, "either")) throw UnsupportedFeature("either types");
      std::string type = expect_name(type_node, "type name");
      if (pending == 0) fail_at(item, "'-' without preceding names");
      for (std::size_t p = out.size() - pending; p < out.size(); ++p) out[p].second = type;
      pending = 0;
      ++k;
      continue;
    }
    std::string name = item.token;
    if (variables) {
      if (name.size() < 2 || name[0] != '?') fail_at(item, "expected variable, got '" + name + "'");
      name = name.substr(1);
      if (!is_identifier(name)) fail_at(item, "invalid variable name '?" + name + "'");
    } else {
      name = expect_name(item, "name");
    }
    out.emplace_back(name, std::string(kRootSort));
    ++pending;
  }
  return out;
}

void check_requirements(const SExpr& section) {
  static const std::set<std::string, std::less<>> supported = {":strips", ":typing",
                                                               ":negative-preconditions"};
  for (std::size_t k = 1; k < section.items.size(); ++k) {
    const std::string& req = expect_token(section.items[k], "requirement");
    if (!supported.count(req)) throw UnsupportedFeature("requirement " + req);
  }
}

void reject_construct(const SExpr& node) {
  static const std::set<std::string, std::less<>> unsupported = {
      "forall", "exists", "or", "imply", "when", "=", "increase", "decrease",
      "assign", "scale-up", "scale-down", "<", ">", "<=", ">="};
  if (node.is_list && !node.items.empty() && !node.items[0].is_list &&
      unsupported.count(node.items[0].token)) {
    const std::string& head = node.items[0].token;
    if (head == "forall" || head == "exists") throw UnsupportedFeature("quantifier " + head);
    if (head == "or" || head == "imply") throw UnsupportedFeature("disjunction " + head);
    if (head == "when") throw UnsupportedFeature("conditional effect");
    throw UnsupportedFeature("numeric or equality construct " + head);
  }
}

struct Literal {
  LiftedAtom atom;
  bool positive = true;
  const SExpr* node = nullptr;
};

class DomainParser {
 public:
  Model parse(const SExpr& root) {
    if (!head_is(root, "define")) fail_at(root, "expected (define ...)");
    auto vocab = std::make_shared<Vocabulary>();
    std::vector<const SExpr*> action_nodes;
    bool seen_name = false;
    for (std::size_t k = 1; k < root.items.size(); ++k) {
      const SExpr& section = root.items[k];
      if (!section.is_list || section.items.empty()) fail_at(section, "expected section");
      const std::string& head = expect_token(section.items[0], "section keyword");
      if (head == "domain") {
        if (section.items.size() != 2) fail_at(section, "expected (domain <name>)");
        vocab->domain_name = expect_name(section.items[1], "domain name");
        seen_name = true;
      } else if (head == ":requirements") {
        check_requirements(section);
      } else if (head == ":types") {
        for (auto& [type, parent] : parse_typed_list(section.items, 1, false)) {
          if (type == kRootSort) continue;
          if (std::find(vocab->types.begin(), vocab->types.end(), type) != vocab->types.end())
            fail_at(section, "duplicate type '" + type + "'");
          vocab->types.push_back(type);
          vocab->parent[type] = parent;
        }
      } else if (head == ":predicates") {
        for (std::size_t p = 1; p < section.items.size(); ++p) parse_predicate(*vocab, section.items[p]);
      } else if (head == ":constants") {
        throw UnsupportedFeature("constants");
      } else if (head == ":functions") {
        throw UnsupportedFeature("numeric fluents");
      } else if (head == ":derived") {
        throw UnsupportedFeature("derived predicates");
      } else if (head == ":durative-action") {
        throw UnsupportedFeature("durative actions");
      } else if (head == ":action") {
        action_nodes.push_back(&section);
      } else {
        fail_at(section, "unknown section '" + head + "'");
      }
    }
    if (!seen_name) fail_at(root, "missing (domain <name>)");
    // Supertypes named only after '-' are declared implicitly under object.
    for (std::size_t k = 0; k < vocab->types.size(); ++k) {
      std::string parent = vocab->parent.at(vocab->types[k]);
      if (parent != kRootSort && !vocab->parent.count(parent)) {
        vocab->types.push_back(parent);
        vocab->parent[parent] = std::string(kRootSort);
      }
    }
    for (const PredicateSchema& schema : vocab->predicates) check_sorts(*vocab, schema.sorts, root);

    std::vector<std::pair<std::vector<Literal>, std::vector<Literal>>> bodies;
    for (const SExpr* node : action_nodes) bodies.push_back(parse_action(*vocab, *node));

    Model model{std::shared_ptr<const Vocabulary>(vocab)};
    for (std::size_t a = 0; a < bodies.size(); ++a) {
      const std::string& action = vocab->actions[a].name;
      add_literals(model, action, Location::pre, bodies[a].first);
      add_literals(model, action, Location::eff, bodies[a].second);
    }
    return model;
  }

 private:
  static void check_sorts(const Vocabulary& vocab, const std::vector<std::string>& sorts, const SExpr& node) {
    for (const std::string& sort : sorts) {
      if (sort != kRootSort && !vocab.parent.count(sort)) fail_at(node, "unknown type '" + sort + "'");
    }
  }

  static void parse_predicate(Vocabulary& vocab, const SExpr& node) {
    if (!node.is_list || node.items.empty()) fail_at(node, "expected predicate declaration");
    PredicateSchema schema;
    schema.name = expect_name(node.items[0], "predicate name");
    if (vocab.find_predicate(schema.name)) fail_at(node, "duplicate predicate '" + schema.name + "'");
    for (auto& [var, sort] : parse_typed_list(node.items, 1, true)) schema.sorts.push_back(sort);
    vocab.predicates.push_back(std::move(schema));
  }

  static void add_literals(Model& model, const std::string& action, Location location,
                           const std::vector<Literal>& literals) {
    for (const Literal& lit : literals) {
      PalmTuple palm{PalTuple{action, location, lit.atom}, lit.positive ? Mode::positive : Mode::negative};
      auto existing = model.mode_of(palm.pal);
      if (existing && *existing == palm.mode) continue;
      if (existing) fail_at(*lit.node, "atom appears both positively and negatively");
      model.insert(palm);
    }
  }

  std::pair<std::vector<Literal>, std::vector<Literal>> parse_action(Vocabulary& vocab, const SExpr& node) {
    if (node.items.size() < 2) fail_at(node, "expected action name");
    ActionHeader header;
    header.name = expect_name(node.items[1], "action name");
    if (vocab.find_action(header.name)) fail_at(node, "duplicate action '" + header.name + "'");
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    for (std::size_t k = 2; k < node.items.size(); k += 2) {
      const std::string& key = expect_token(node.items[k], "action keyword");
      if (k + 1 >= node.items.size()) fail_at(node.items[k], "missing value for " + key);
      const SExpr& value = node.items[k + 1];
      if (key == ":parameters") {
        if (!value.is_list) fail_at(value, "expected parameter list");
        for (auto& [var, sort] : parse_typed_list(value.items, 0, true)) {
          if (std::find(header.params.begin(), header.params.end(), var) != header.params.end())
            fail_at(value, "repeated parameter '?" + var + "'");
          header.params.push_back(var);
          header.sorts.push_back(sort);
        }
      } else if (key == ":precondition") {
        pre = &value;
      } else if (key == ":effect") {
        eff = &value;
      } else {
        fail_at(node.items[k], "unknown action keyword '" + key + "'");
      }
    }
    check_sorts(vocab, header.sorts, node);
    vocab.actions.push_back(header);
    std::vector<Literal> pre_lits;
    std::vector<Literal> eff_lits;
    if (pre) collect(vocab, header, *pre, pre_lits);
    if (eff) collect(vocab, header, *eff, eff_lits);
    return {std::move(pre_lits), std::move(eff_lits)};
  }

  void collect(const Vocabulary& vocab, const ActionHeader& header, const SExpr& node,
               std::vector<Literal>& out) {
    if (!node.is_list) fail_at(node, "expected formula");
    if (node.items.empty()) return;
    reject_construct(node);
    if (head_is(node, "and")) {
      for (std::size_t k = 1; k < node.items.size(); ++k) collect(vocab, header, node.items[k], out);
      return;
    }
    if (head_is(node, "not")) {
      if (node.items.size() != 2) fail_at(node, "expected (not <atom>)");
      reject_construct(node.items[1]);
      if (head_is(node.items[1], "and") || head_is(node.items[1], "not"))
        throw UnsupportedFeature("negation of compound formula");
      out.push_back({lift(vocab, header, node.items[1]), false, &node});
      return;
    }
    out.push_back({lift(vocab, header, node), true, &node});
  }

  static LiftedAtom lift(const Vocabulary& vocab, const ActionHeader& header, const SExpr& node) {
    if (!node.is_list || node.items.empty()) fail_at(node, "expected atom");
    LiftedAtom atom;
    atom.predicate = expect_token(node.items[0], "predicate name");
    const PredicateSchema* schema = vocab.find_predicate(atom.predicate);
    if (!schema) fail_at(node, "unknown predicate '" + atom.predicate + "'");
    if (node.items.size() - 1 != schema->arity())
      fail_at(node, "predicate '" + atom.predicate + "' expects " + std::to_string(schema->arity()) +
                        " arguments");
    for (std::size_t k = 1; k < node.items.size(); ++k) {
      const std::string& arg = expect_token(node.items[k], "argument");
      if (arg[0] != '?') throw UnsupportedFeature("constant '" + arg + "' in action schema");
      auto it = std::find(header.params.begin(), header.params.end(), arg.substr(1));
      if (it == header.params.end()) fail_at(node.items[k], "unknown parameter '" + arg + "'");
      std::size_t index = static_cast<std::size_t>(it - header.params.begin());
      if (std::find(atom.args.begin(), atom.args.end(), index) != atom.args.end())
        throw UnsupportedFeature("repeated variable '" + arg + "' in atom");
      if (!vocab.sorts_overlap(header.sorts[index], schema->sorts[k - 1]))
        fail_at(node.items[k], "parameter '" + arg + "' has incompatible type");
      atom.args.push_back(index);
    }
    return atom;
  }
};

GroundAtom ground_from_sexpr(const SExpr& node) {
  if (!node.is_list || node.items.empty()) fail_at(node, "expected ground atom");
  GroundAtom atom;
  atom.predicate = expect_token(node.items[0], "predicate name");
  for (std::size_t k = 1; k < node.items.size(); ++k) {
    const std::string& obj = expect_token(node.items[k], "object");
    if (obj[0] == '?') fail_at(node.items[k], "variable in ground atom");
    atom.objects.push_back(obj);
  }
  return atom;
}

}  // namespace

Model parse_domain(std::string_view text) {
  Reader reader(text);
  SExpr root = reader.read_document();
  return DomainParser().parse(root);
}

ProblemInstance parse_problem(std::string_view text, const Vocabulary& vocabulary) {
  Reader reader(text);
  SExpr root = reader.read_document();
  if (!head_is(root, "define")) fail_at(root, "expected (define ...)");
  ProblemInstance instance;
  std::vector<const SExpr*> init_nodes;
  for (std::size_t k = 1; k < root.items.size(); ++k) {
    const SExpr& section = root.items[k];
    if (!section.is_list || section.items.empty()) fail_at(section, "expected section");
    const std::string& head = expect_token(section.items[0], "section keyword");
    if (head == "problem") {
      if (section.items.size() != 2) fail_at(section, "expected (problem <name>)");
      instance.name = expect_name(section.items[1], "problem name");
    } else if (head == ":domain") {
      if (section.items.size() != 2) fail_at(section, "expected (:domain <name>)");
      instance.domain_name = expect_token(section.items[1], "domain name");
      if (instance.domain_name != vocabulary.domain_name)
        throw VocabularyMismatch("problem refers to domain '" + instance.domain_name + "', expected '" +
                                 vocabulary.domain_name + "'");
    } else if (head == ":objects") {
      for (auto& [name, sort] : parse_typed_list(section.items, 1, false)) {
        if (sort != kRootSort && !vocabulary.parent.count(sort))
          fail_at(section, "unknown type '" + sort + "'");
        if (instance.sort_of(name)) fail_at(section, "duplicate object '" + name + "'");
        instance.objects.emplace_back(name, sort);
      }
    } else if (head == ":init") {
      for (std::size_t a = 1; a < section.items.size(); ++a) init_nodes.push_back(&section.items[a]);
    } else if (head == ":goal" || head == ":requirements") {
      // goals play no role in interrogation
    } else if (head == ":metric") {
      throw UnsupportedFeature("metric");
    } else {
      fail_at(section, "unknown section '" + head + "'");
    }
  }
  for (const SExpr* node : init_nodes) {
    reject_construct(*node);
    if (head_is(*node, "not")) continue;  // closed world
    GroundAtom atom = ground_from_sexpr(*node);
    const PredicateSchema* schema = vocabulary.find_predicate(atom.predicate);
    if (!schema) fail_at(*node, "unknown predicate '" + atom.predicate + "'");
    if (schema->arity() != atom.objects.size()) fail_at(*node, "arity mismatch for '" + atom.predicate + "'");
    for (std::size_t a = 0; a < atom.objects.size(); ++a) {
      const std::string* sort = instance.sort_of(atom.objects[a]);
      if (!sort) fail_at(*node, "undeclared object '" + atom.objects[a] + "'");
      if (!vocabulary.is_subtype(*sort, schema->sorts[a]))
        fail_at(*node, "object '" + atom.objects[a] + "' has incompatible type");
    }
    instance.init.insert(std::move(atom));
  }
  return instance;
}

GroundAtom parse_ground_atom(std::string_view text) {
  Reader reader(text);
  return ground_from_sexpr(reader.read_document());
}

ActionCall parse_action_call(std::string_view text) {
  GroundAtom atom = parse_ground_atom(text);
  return ActionCall{std::move(atom.predicate), std::move(atom.objects)};
}

}  // namespace aia

#include "relkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace relkit {

namespace {

[[noreturn]] void err(int line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    Line l{number, {}};
    std::string tok;
    while (ls >> tok) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

// "key=value" accessor over header tokens.
std::string header_field(const Line& l, const std::string& key) {
  for (size_t i = 1; i < l.tokens.size(); ++i) {
    const std::string& t = l.tokens[i];
    if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
  }
  err(l.number, "missing header field '" + key + "='");
}

int parse_int(const std::string& s, int line, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    err(line, "expected integer for " + what + ", got '" + s + "'");
  }
}

Alphabet parse_alphabet(const std::string& csv, int line) {
  Alphabet sigma;
  std::string cur;
  std::istringstream in(csv);
  while (std::getline(in, cur, ',')) {
    try {
      sigma.add(cur);
    } catch (const InputError& e) {
      err(line, e.what());
    }
  }
  if (sigma.size() == 0) err(line, "empty alphabet");
  return sigma;
}

struct StateTable {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  int add(const std::string& name, int line) {
    if (index.count(name)) err(line, "duplicate state '" + name + "'");
    int id = static_cast<int>(names.size());
    names.push_back(name);
    index[name] = id;
    return id;
  }
  int at(const std::string& name, int line) const {
    auto it = index.find(name);
    if (it == index.end()) err(line, "undeclared state '" + name + "'");
    return it->second;
  }
  std::string fresh(const std::string& base) const {
    if (!index.count(base)) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!index.count(cand)) return cand;
    }
  }
};

// Splits "(p1,p2,...)" into parts; parts may be empty.
std::vector<std::string> split_parenthesized(const std::string& s, int line, int expect) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    err(line, "expected parenthesized tuple, got '" + s + "'");
  std::vector<std::string> parts;
  std::string cur;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += s[i];
    }
  }
  parts.push_back(cur);
  if (static_cast<int>(parts.size()) != expect)
    err(line, "expected " + std::to_string(expect) + " components, got " +
                  std::to_string(parts.size()));
  return parts;
}

Word parse_word_at(const Alphabet& sigma, const std::string& text, int line) {
  try {
    return parse_word(sigma, text);
  } catch (const InputError& e) {
    err(line, e.what());
  }
}

TupleLetter parse_tuple_letter(const Alphabet& sigma, const std::string& text, int line,
                               int width) {
  std::vector<std::string> parts = width == 1 && text.find('(') == std::string::npos
                                       ? std::vector<std::string>{text}
                                       : split_parenthesized(text, line, width);
  TupleLetter l;
  for (const std::string& p : parts) {
    if (p == "_") {
      l.push_back(kPad);
    } else {
      auto s = sigma.find(p);
      if (!s) err(line, "unknown letter '" + p + "'");
      l.push_back(*s);
    }
  }
  return l;
}

struct StateFlags {
  bool initial = false;
  bool final = false;
  int tape = -1;  // 1-based from the file, -1 if absent
};

StateFlags parse_state_flags(const Line& l, int first) {
  StateFlags f;
  for (size_t i = static_cast<size_t>(first); i < l.tokens.size(); ++i) {
    const std::string& t = l.tokens[i];
    if (t == "initial")
      f.initial = true;
    else if (t == "final")
      f.final = true;
    else if (t.rfind("tape=", 0) == 0)
      f.tape = parse_int(t.substr(5), l.number, "tape");
    else
      err(l.number, "unknown state attribute '" + t + "'");
  }
  return f;
}

int resolve_initial(const std::vector<int>& initials, int header_line) {
  if (initials.size() != 1)
    err(header_line, "exactly one initial state required, found " +
                         std::to_string(initials.size()));
  return initials[0];
}

AnyAutomaton parse_ktape(const std::vector<Line>& lines) {
  const Line& h = lines[0];
  int k = parse_int(header_field(h, "k"), h.number, "k");
  int det = parse_int(header_field(h, "det"), h.number, "det");
  if (k < 1) err(h.number, "k must be >= 1");
  if (det != 0 && det != 1) err(h.number, "det must be 0 or 1");
  Alphabet sigma = parse_alphabet(header_field(h, "alphabet"), h.number);

  StateTable states;
  std::vector<int> initials;
  std::vector<bool> finals;
  std::vector<int> tapes;
  struct RawTrans {
    int line, src, dst;
    std::string label;
  };
  std::vector<RawTrans> raw;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "state") {
      if (l.tokens.size() < 2) err(l.number, "state needs a name");
      int id = states.add(l.tokens[1], l.number);
      StateFlags f = parse_state_flags(l, 2);
      if (det && f.tape == -1) err(l.number, "deterministic state needs tape=<i>");
      if (!det && f.tape != -1) err(l.number, "tape= only valid with det=1");
      if (det && (f.tape < 1 || f.tape > k)) err(l.number, "tape out of range");
      if (f.initial) initials.push_back(id);
      finals.push_back(f.final);
      tapes.push_back(det ? f.tape - 1 : 0);
    } else if (l.tokens[0] == "trans") {
      if (l.tokens.size() != 4) err(l.number, "trans needs: src label dst");
      raw.push_back({l.number, states.at(l.tokens[1], l.number),
                     states.at(l.tokens[3], l.number), l.tokens[2]});
    } else {
      err(l.number, "unknown keyword '" + l.tokens[0] + "'");
    }
  }
  int initial = resolve_initial(initials, h.number);

  if (!det) {
    KTapeAutomaton a;
    a.arity = k;
    a.sigma = sigma;
    a.state_names = states.names;
    a.initial = initial;
    a.finals = finals;
    for (const RawTrans& t : raw) {
      std::vector<std::string> parts = split_parenthesized(t.label, t.line, k);
      WordTuple labels;
      for (const std::string& p : parts) labels.push_back(parse_word_at(sigma, p, t.line));
      a.transitions.push_back({t.src, std::move(labels), t.dst});
    }
    return a;
  }

  Mdfa a;
  a.arity = k;
  a.sigma = sigma;
  a.state_names = states.names;
  a.tape_of = tapes;
  a.initial = initial;
  a.finals = finals;
  int n = static_cast<int>(states.names.size());
  a.delta.assign(static_cast<size_t>(n),
                 std::vector<int>(static_cast<size_t>(sigma.size()), -1));
  a.delta_end.assign(static_cast<size_t>(n), -1);
  for (const RawTrans& t : raw) {
    int* slot;
    if (t.label == "END") {
      slot = &a.delta_end[static_cast<size_t>(t.src)];
    } else {
      auto c = sigma.find(t.label);
      if (!c) err(t.line, "unknown letter '" + t.label + "'");
      slot = &a.delta[static_cast<size_t>(t.src)][static_cast<size_t>(*c)];
    }
    if (*slot != -1) err(t.line, "duplicate transition");
    *slot = t.dst;
  }
  // Missing entries fall into an implicit rejecting sink.
  bool need_dead = false;
  for (int q = 0; q < n; ++q) {
    for (int d : a.delta[static_cast<size_t>(q)])
      if (d == -1) need_dead = true;
    if (a.delta_end[static_cast<size_t>(q)] == -1) need_dead = true;
  }
  if (need_dead) {
    int dead = n;
    a.state_names.push_back(states.fresh("dead"));
    a.tape_of.push_back(0);
    a.finals.push_back(false);
    for (int q = 0; q < n; ++q) {
      for (auto& d : a.delta[static_cast<size_t>(q)])
        if (d == -1) d = dead;
      if (a.delta_end[static_cast<size_t>(q)] == -1) a.delta_end[static_cast<size_t>(q)] = dead;
    }
    a.delta.push_back(std::vector<int>(static_cast<size_t>(sigma.size()), dead));
    a.delta_end.push_back(dead);
  }
  return a;
}

AnyAutomaton parse_nba(const std::vector<Line>& lines) {
  const Line& h = lines[0];
  int m = parse_int(header_field(h, "m"), h.number, "m");
  if (m < 1) err(h.number, "m must be >= 1");
  Alphabet sigma = parse_alphabet(header_field(h, "alphabet"), h.number);
  Nba a;
  a.width = m;
  a.sigma = sigma;
  StateTable states;
  std::vector<int> initials;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "state") {
      if (l.tokens.size() < 2) err(l.number, "state needs a name");
      int id = states.add(l.tokens[1], l.number);
      StateFlags f = parse_state_flags(l, 2);
      if (f.tape != -1) err(l.number, "tape= not valid for nba");
      if (f.initial) initials.push_back(id);
      a.accepting.push_back(f.final);
    } else if (l.tokens[0] == "trans") {
      if (l.tokens.size() != 4) err(l.number, "trans needs: src letter dst");
      a.transitions.push_back({states.at(l.tokens[1], l.number),
                               parse_tuple_letter(sigma, l.tokens[2], l.number, m),
                               states.at(l.tokens[3], l.number)});
    } else {
      err(l.number, "unknown keyword '" + l.tokens[0] + "'");
    }
  }
  a.state_names = states.names;
  a.initial = resolve_initial(initials, h.number);
  return a;
}

AnyAutomaton parse_dpa(const std::vector<Line>& lines) {
  const Line& h = lines[0];
  int m = parse_int(header_field(h, "m"), h.number, "m");
  if (m < 1) err(h.number, "m must be >= 1");
  Alphabet sigma = parse_alphabet(header_field(h, "alphabet"), h.number);
  Dpa a;
  a.width = m;
  a.sigma = sigma;
  StateTable states;
  std::vector<int> initials;
  struct RawTrans {
    int line, src, dst;
    std::string label;
  };
  std::vector<RawTrans> raw;
  std::vector<std::pair<int, int>> prios;  // (state, prio)
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "state") {
      if (l.tokens.size() < 2) err(l.number, "state needs a name");
      int id = states.add(l.tokens[1], l.number);
      StateFlags f = parse_state_flags(l, 2);
      if (f.tape != -1 || f.final) err(l.number, "dpa states take only 'initial'");
      if (f.initial) initials.push_back(id);
    } else if (l.tokens[0] == "prio") {
      if (l.tokens.size() != 3) err(l.number, "prio needs: state value");
      prios.push_back({states.at(l.tokens[1], l.number),
                       parse_int(l.tokens[2], l.number, "priority")});
    } else if (l.tokens[0] == "trans") {
      if (l.tokens.size() != 4) err(l.number, "trans needs: src letter dst");
      raw.push_back({l.number, states.at(l.tokens[1], l.number),
                     states.at(l.tokens[3], l.number), l.tokens[2]});
    } else {
      err(l.number, "unknown keyword '" + l.tokens[0] + "'");
    }
  }
  a.state_names = states.names;
  a.initial = resolve_initial(initials, h.number);
  int n = static_cast<int>(states.names.size());
  a.priority.assign(static_cast<size_t>(n), -1);
  for (auto [q, p] : prios) {
    if (a.priority[static_cast<size_t>(q)] != -1) err(h.number, "duplicate prio for a state");
    a.priority[static_cast<size_t>(q)] = p;
  }
  for (int q = 0; q < n; ++q)
    if (a.priority[static_cast<size_t>(q)] == -1)
      err(h.number, "missing prio for state '" + states.names[static_cast<size_t>(q)] + "'");
  a.delta.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(a.num_letters()), -1));
  for (const auto& t : raw) {
    TupleLetter l = parse_tuple_letter(sigma, t.label, t.line, m);
    for (Sym s : l)
      if (s == kPad) err(t.line, "padding not allowed in dpa letters");
    int idx = a.letter_index(l);
    int& slot = a.delta[static_cast<size_t>(t.src)][static_cast<size_t>(idx)];
    if (slot != -1) err(t.line, "duplicate transition");
    slot = t.dst;
  }
  for (int q = 0; q < n; ++q)
    for (int d : a.delta[static_cast<size_t>(q)])
      if (d == -1)
        err(h.number, "dpa transition function not total at state '" +
                          states.names[static_cast<size_t>(q)] + "'");
  return a;
}

AnyAutomaton parse_indep(const std::vector<Line>& lines) {
  const Line& h = lines[0];
  int k = parse_int(header_field(h, "k"), h.number, "k");
  if (k < 1) err(h.number, "k must be >= 1");
  Alphabet sigma = parse_alphabet(header_field(h, "alphabet"), h.number);
  IndependentKTape a;
  a.arity = k;
  a.sigma = sigma;
  std::vector<StateTable> tables(static_cast<size_t>(k));
  std::vector<std::vector<int>> initials(static_cast<size_t>(k));
  struct RawTrans {
    int line, comp, src, dst;
    std::string label;
  };
  std::vector<RawTrans> raw;
  std::vector<std::pair<int, std::vector<std::string>>> raw_finals;
  int comp = -1;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "component") {
      if (l.tokens.size() != 2) err(l.number, "component needs an index");
      int c = parse_int(l.tokens[1], l.number, "component index");
      if (c != comp + 2) err(l.number, "components must appear in order 1..k");
      if (c > k) err(l.number, "component index out of range");
      comp = c - 1;
    } else if (l.tokens[0] == "state") {
      if (comp < 0) err(l.number, "state before any component line");
      if (l.tokens.size() < 2) err(l.number, "state needs a name");
      int id = tables[static_cast<size_t>(comp)].add(l.tokens[1], l.number);
      StateFlags f = parse_state_flags(l, 2);
      if (f.tape != -1 || f.final)
        err(l.number, "component states take only 'initial' (finals via finaltuple)");
      if (f.initial) initials[static_cast<size_t>(comp)].push_back(id);
    } else if (l.tokens[0] == "trans") {
      if (comp < 0) err(l.number, "trans before any component line");
      if (l.tokens.size() != 4) err(l.number, "trans needs: src letter dst");
      raw.push_back({l.number, comp, tables[static_cast<size_t>(comp)].at(l.tokens[1], l.number),
                     tables[static_cast<size_t>(comp)].at(l.tokens[3], l.number), l.tokens[2]});
    } else if (l.tokens[0] == "finaltuple") {
      if (static_cast<int>(l.tokens.size()) != k + 1)
        err(l.number, "finaltuple needs one state per component");
      raw_finals.push_back({l.number, {l.tokens.begin() + 1, l.tokens.end()}});
    } else {
      err(l.number, "unknown keyword '" + l.tokens[0] + "'");
    }
  }
  if (comp != k - 1) err(h.number, "expected " + std::to_string(k) + " components");
  for (int c = 0; c < k; ++c) {
    Dfa d;
    d.sigma = sigma;
    d.state_names = tables[static_cast<size_t>(c)].names;
    d.initial = resolve_initial(initials[static_cast<size_t>(c)], h.number);
    d.finals.assign(d.state_names.size(), false);
    d.delta.assign(d.state_names.size(),
                   std::vector<int>(static_cast<size_t>(sigma.size()), -1));
    a.components.push_back(std::move(d));
  }
  for (const RawTrans& t : raw) {
    auto c = sigma.find(t.label);
    if (!c) err(t.line, "unknown letter '" + t.label + "'");
    int& slot = a.components[static_cast<size_t>(t.comp)]
                    .delta[static_cast<size_t>(t.src)][static_cast<size_t>(*c)];
    if (slot != -1) err(t.line, "duplicate transition");
    slot = t.dst;
  }
  for (int c = 0; c < k; ++c) {
    Dfa& d = a.components[static_cast<size_t>(c)];
    for (size_t q = 0; q < d.delta.size(); ++q)
      for (int dd : d.delta[q])
        if (dd == -1)
          err(h.number, "component " + std::to_string(c + 1) + " not complete at state '" +
                            d.state_names[q] + "'");
  }
  for (const auto& [line, names] : raw_finals) {
    std::vector<int> tuple;
    for (int c = 0; c < k; ++c)
      tuple.push_back(tables[static_cast<size_t>(c)].at(names[static_cast<size_t>(c)], line));
    a.final_tuples.insert(tuple);
  }
  return a;
}

std::string alphabet_csv(const Alphabet& sigma) {
  std::string out;
  for (int i = 0; i < sigma.size(); ++i) {
    if (i) out += ",";
    out += sigma.name(i);
  }
  return out;
}

void print_state_line(std::ostream& o, const std::string& name, int tape, bool initial,
                      bool final_flag) {
  o << "state " << name;
  if (tape >= 0) o << " tape=" << (tape + 1);
  if (initial) o << " initial";
  if (final_flag) o << " final";
  o << "\n";
}

std::string tuple_letter_to_string(const Alphabet& sigma, const TupleLetter& l) {
  std::string out = "(";
  for (size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += l[i] == kPad ? "_" : sigma.name(l[i]);
  }
  return out + ")";
}

}  // namespace

Word parse_word(const Alphabet& sigma, const std::string& text) {
  Word out;
  if (text.empty()) return out;
  if (text.find('.') != std::string::npos) {
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, '.')) {
      auto s = sigma.find(cur);
      if (!s) throw InputError("unknown letter '" + cur + "'");
      out.push_back(*s);
    }
    return out;
  }
  size_t max_len = 0;
  for (const std::string& l : sigma.letters()) max_len = std::max(max_len, l.size());
  size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (size_t len = std::min(max_len, text.size() - pos); len >= 1 && !matched; --len) {
      auto s = sigma.find(text.substr(pos, len));
      if (s) {
        out.push_back(*s);
        pos += len;
        matched = true;
      }
    }
    if (!matched)
      throw InputError("cannot read a letter at '" + text.substr(pos) + "' in word '" + text +
                       "'");
  }
  return out;
}

WordTuple parse_tuple(const Alphabet& sigma, const std::string& text, int k) {
  std::vector<std::string> parts = split_parenthesized(text, 0, k);
  WordTuple out;
  for (const std::string& p : parts) out.push_back(parse_word(sigma, p));
  return out;
}

AnyAutomaton parse_automaton(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw InputError("line 1: empty input");
  const std::string& kind = lines[0].tokens[0];
  if (kind == "ktape") return parse_ktape(lines);
  if (kind == "nba") return parse_nba(lines);
  if (kind == "dpa") return parse_dpa(lines);
  if (kind == "indep") return parse_indep(lines);
  err(lines[0].number, "unknown header keyword '" + kind + "'");
}

AnyAutomaton parse_automaton_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str());
}

std::string print_automaton(const KTapeAutomaton& a) {
  std::ostringstream o;
  o << "ktape k=" << a.arity << " det=0 alphabet=" << alphabet_csv(a.sigma) << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    print_state_line(o, a.state_names[static_cast<size_t>(q)], -1, q == a.initial,
                     a.finals[static_cast<size_t>(q)]);
  bool dots = false;
  for (const std::string& l : a.sigma.letters())
    if (l.size() > 1) dots = true;
  for (const auto& t : a.transitions) {
    o << "trans " << a.state_names[static_cast<size_t>(t.src)] << " (";
    for (size_t i = 0; i < t.labels.size(); ++i) {
      if (i) o << ",";
      o << word_to_string(a.sigma, t.labels[i], dots);
    }
    o << ") " << a.state_names[static_cast<size_t>(t.dst)] << "\n";
  }
  return o.str();
}

std::string print_automaton(const Mdfa& a) {
  std::ostringstream o;
  o << "ktape k=" << a.arity << " det=1 alphabet=" << alphabet_csv(a.sigma) << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    print_state_line(o, a.state_names[static_cast<size_t>(q)], a.tape_of[static_cast<size_t>(q)],
                     q == a.initial, a.finals[static_cast<size_t>(q)]);
  for (int q = 0; q < a.num_states(); ++q) {
    for (int c = 0; c < a.sigma.size(); ++c)
      o << "trans " << a.state_names[static_cast<size_t>(q)] << " " << a.sigma.name(c) << " "
        << a.state_names[static_cast<size_t>(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)])]
        << "\n";
    o << "trans " << a.state_names[static_cast<size_t>(q)] << " END "
      << a.state_names[static_cast<size_t>(a.delta_end[static_cast<size_t>(q)])] << "\n";
  }
  return o.str();
}

std::string print_automaton(const Nba& a) {
  std::ostringstream o;
  o << "nba m=" << a.width << " alphabet=" << alphabet_csv(a.sigma) << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    print_state_line(o, a.state_names[static_cast<size_t>(q)], -1, q == a.initial,
                     a.accepting[static_cast<size_t>(q)]);
  for (const auto& t : a.transitions)
    o << "trans " << a.state_names[static_cast<size_t>(t.src)] << " "
      << tuple_letter_to_string(a.sigma, t.letter) << " "
      << a.state_names[static_cast<size_t>(t.dst)] << "\n";
  return o.str();
}

std::string print_automaton(const Dpa& a) {
  std::ostringstream o;
  o << "dpa m=" << a.width << " alphabet=" << alphabet_csv(a.sigma) << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    print_state_line(o, a.state_names[static_cast<size_t>(q)], -1, q == a.initial, false);
  for (int q = 0; q < a.num_states(); ++q)
    o << "prio " << a.state_names[static_cast<size_t>(q)] << " "
      << a.priority[static_cast<size_t>(q)] << "\n";
  for (int q = 0; q < a.num_states(); ++q)
    for (int idx = 0; idx < a.num_letters(); ++idx)
      o << "trans " << a.state_names[static_cast<size_t>(q)] << " "
        << tuple_letter_to_string(a.sigma, a.letter_of_index(idx)) << " "
        << a.state_names[static_cast<size_t>(a.delta[static_cast<size_t>(q)][static_cast<size_t>(idx)])]
        << "\n";
  return o.str();
}

std::string print_automaton(const IndependentKTape& a) {
  std::ostringstream o;
  o << "indep k=" << a.arity << " alphabet=" << alphabet_csv(a.sigma) << "\n";
  for (int c = 0; c < a.arity; ++c) {
    const Dfa& d = a.components[static_cast<size_t>(c)];
    o << "component " << (c + 1) << "\n";
    for (int q = 0; q < d.num_states(); ++q)
      print_state_line(o, d.state_names[static_cast<size_t>(q)], -1, q == d.initial, false);
    for (int q = 0; q < d.num_states(); ++q)
      for (int s = 0; s < d.sigma.size(); ++s)
        o << "trans " << d.state_names[static_cast<size_t>(q)] << " " << d.sigma.name(s) << " "
          << d.state_names[static_cast<size_t>(d.delta[static_cast<size_t>(q)][static_cast<size_t>(s)])]
          << "\n";
  }
  for (const auto& tuple : a.final_tuples) {
    o << "finaltuple";
    for (int c = 0; c < a.arity; ++c)
      o << " "
        << a.components[static_cast<size_t>(c)].state_names[static_cast<size_t>(tuple[static_cast<size_t>(c)])];
    o << "\n";
  }
  return o.str();
}

std::string print_automaton(const AnyAutomaton& a) {
  return std::visit([](const auto& x) { return print_automaton(x); }, a);
}

}  // namespace relkit

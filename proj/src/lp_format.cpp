// LP text writer and reader for MilpModel.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "milp.hpp"

namespace evrp {

namespace {

constexpr std::size_t kTermsPerLine = 6;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

void write_terms(std::ostringstream& os, const MilpModel& model, const std::vector<Term>& terms) {
  const auto& vars = model.variables();
  if (terms.empty()) {
    os << " 0 " << vars.front().name;
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && i % kTermsPerLine == 0) os << "\n  ";
    double c = terms[i].coef;
    if (i == 0) {
      if (c < 0) os << " -";
    } else {
      os << (c < 0 ? " -" : " +");
    }
    double a = std::abs(c);
    if (a != 1.0) os << ' ' << num(a);
    os << ' ' << vars[terms[i].var].name;
  }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::ostringstream os;
  os << "\\ electric vehicle relocation model\n";
  os << "\\ workers " << model.workers() << ", nodes " << model.node_count() << ", arcs " << model.arc_count()
     << ", horizon " << num(model.horizon()) << "\n";
  for (std::size_t i = 0; i < model.node_notes_.size(); ++i)
    os << "\\ node " << i << ": " << model.node_notes_[i] << "\n";
  os << "Maximize\n obj:";
  write_terms(os, model, model.objective());
  os << "\nSubject To\n";
  for (const auto& row : model.rows()) {
    os << ' ' << row.name << ':';
    write_terms(os, model, row.terms);
    os << ' ' << sense_text(row.sense) << ' ' << num(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.variables())
    if (v.type == VarType::Continuous) os << ' ' << v.name << " >= 0\n";
  os << "Binaries\n";
  std::size_t col = 0;
  for (const auto& v : model.variables()) {
    if (v.type != VarType::Binary) continue;
    os << ' ' << v.name;
    if (++col % 8 == 0) os << '\n';
  }
  if (col % 8 != 0) os << '\n';
  os << "End\n";
  return os.str();
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (*b == '+') ++b;
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

bool is_sense(const std::string& tok) {
  return tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">" || tok == "=<" || tok == "=>";
}

Sense to_sense(const std::string& tok) {
  if (tok == "<=" || tok == "<" || tok == "=<") return Sense::LessEqual;
  if (tok == ">=" || tok == ">" || tok == "=>") return Sense::GreaterEqual;
  return Sense::Equal;
}

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

struct Token {
  std::string text;
  std::size_t line;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> toks;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto bs = line.find('\\');
    if (bs != std::string::npos) line.resize(bs);
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      if (line[i] == '<' || line[i] == '>' || line[i] == '=') {
        while (j < line.size() && (line[j] == '<' || line[j] == '>' || line[j] == '=')) ++j;
      } else if (line[i] == '+' || line[i] == '-') {
        j = i + 1;
        // A sign glued to a number stays with it.
        if (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) {
          while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '<' &&
                 line[j] != '>' && line[j] != '=')
            ++j;
        }
      } else {
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '<' &&
               line[j] != '>' && line[j] != '=')
          ++j;
      }
      toks.push_back({line.substr(i, j - i), lineno});
      i = j;
    }
  }
  return toks;
}

[[noreturn]] void fail(const Token& tok, const std::string& msg) {
  throw ParseError("LP line " + std::to_string(tok.line) + ": " + msg + " near '" + tok.text + "'");
}

}  // namespace

LpProblem parse_lp(const std::string& text) {
  auto toks = tokenize(text);
  LpProblem lp;
  std::set<std::string> binaries;
  Section section = Section::None;
  std::size_t i = 0;

  auto section_at = [&](std::size_t k, std::size_t& consumed) -> std::optional<Section> {
    auto w = lower(toks[k].text);
    consumed = 1;
    if (w == "maximize" || w == "maximum" || w == "max") {
      lp.maximize = true;
      return Section::Objective;
    }
    if (w == "minimize" || w == "minimum" || w == "min") {
      lp.maximize = false;
      return Section::Objective;
    }
    if (w == "subject" && k + 1 < toks.size() && lower(toks[k + 1].text) == "to") {
      consumed = 2;
      return Section::Constraints;
    }
    if (w == "such" && k + 1 < toks.size() && lower(toks[k + 1].text) == "that") {
      consumed = 2;
      return Section::Constraints;
    }
    if (w == "st" || w == "s.t.") return Section::Constraints;
    if (w == "bounds" || w == "bound") return Section::Bounds;
    if (w == "binaries" || w == "binary" || w == "bin") return Section::Binaries;
    if (w == "generals" || w == "general" || w == "gen") return Section::Generals;
    if (w == "end") return Section::End;
    return std::nullopt;
  };

  // Parses "[name:] terms" and returns the term map; stops before a sense
  // token or a section keyword.
  auto parse_expression = [&](std::map<std::string, double>& terms) {
    while (i < toks.size()) {
      std::size_t consumed;
      if (is_sense(toks[i].text) || section_at(i, consumed)) return;
      if (!toks[i].text.empty() && toks[i].text.back() == ':') return;  // next named row
      double sign = 1.0;
      if (toks[i].text == "+" || toks[i].text == "-") {
        sign = toks[i].text == "-" ? -1.0 : 1.0;
        ++i;
        if (i >= toks.size()) fail(toks.back(), "dangling sign");
      }
      double coef = 1.0;
      if (parse_number(toks[i].text, coef)) {
        ++i;
        if (i >= toks.size() || is_sense(toks[i].text)) fail(toks[i - 1], "constant term in expression");
      }
      const auto& name = toks[i].text;
      if (parse_number(name, coef) || is_sense(name)) fail(toks[i], "expected a variable");
      terms[name] += sign * coef;
      ++i;
    }
  };

  auto drop_zeros = [](std::map<std::string, double>& terms) {
    for (auto it = terms.begin(); it != terms.end();) it = it->second == 0.0 ? terms.erase(it) : std::next(it);
  };

  while (i < toks.size()) {
    std::size_t consumed;
    if (auto s = section_at(i, consumed)) {
      if (section == Section::None && *s != Section::Objective) fail(toks[i], "expected an objective section");
      section = *s;
      i += consumed;
      if (section == Section::End) break;
      continue;
    }
    switch (section) {
      case Section::None: fail(toks[i], "expected an objective section");
      case Section::Objective: {
        if (toks[i].text.back() == ':') ++i;
        parse_expression(lp.objective);
        drop_zeros(lp.objective);
        break;
      }
      case Section::Constraints: {
        LpRow row;
        if (toks[i].text.back() == ':') {
          row.name = toks[i].text.substr(0, toks[i].text.size() - 1);
          ++i;
        } else {
          row.name = "R" + std::to_string(lp.rows.size() + 1);
        }
        parse_expression(row.terms);
        drop_zeros(row.terms);
        if (i >= toks.size() || !is_sense(toks[i].text)) fail(toks[std::min(i, toks.size() - 1)], "expected a sense");
        row.sense = to_sense(toks[i].text);
        ++i;
        if (i >= toks.size() || !parse_number(toks[i].text, row.rhs)) fail(toks[std::min(i, toks.size() - 1)], "expected a right-hand side");
        ++i;
        lp.rows.push_back(std::move(row));
        break;
      }
      case Section::Bounds:
        // "name >= value" and similar one-line bounds; only the column name matters here.
        ++i;
        break;
      case Section::Binaries:
      case Section::Generals:
        binaries.insert(toks[i].text);
        ++i;
        break;
      case Section::End: break;
    }
  }
  lp.binaries.assign(binaries.begin(), binaries.end());
  return lp;
}

LpProblem canonical_lp(const MilpModel& model) {
  LpProblem lp;
  lp.maximize = true;
  const auto& vars = model.variables();
  for (const auto& t : model.objective())
    if (t.coef != 0.0) lp.objective[vars[t.var].name] += t.coef;
  for (const auto& r : model.rows()) {
    LpRow row;
    row.name = r.name;
    for (const auto& t : r.terms)
      if (t.coef != 0.0) row.terms[vars[t.var].name] += t.coef;
    row.sense = r.sense;
    row.rhs = r.rhs;
    lp.rows.push_back(std::move(row));
  }
  for (const auto& v : vars)
    if (v.type == VarType::Binary) lp.binaries.push_back(v.name);
  std::sort(lp.binaries.begin(), lp.binaries.end());
  return lp;
}

std::map<std::string, double> parse_assignment(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name) || name[0] == '#') continue;
    double v = 0;
    if (!(ls >> value) || !parse_number(value, v))
      throw ParseError("assignment line " + std::to_string(lineno) + ": expected 'name value'");
    values[name] = v;
  }
  return values;
}

std::string format_assignment(const MilpModel& model, std::span<const double> values) {
  if (values.size() != model.variables().size()) throw ArgumentError("assignment size does not match the model");
  std::ostringstream os;
  for (std::size_t v = 0; v < values.size(); ++v) os << model.variables()[v].name << ' ' << num(values[v]) << '\n';
  return os.str();
}

}  // namespace evrp

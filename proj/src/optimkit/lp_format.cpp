#include "docsdn/optimkit/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace docsdn::opt {
namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes " + c name" terms, wrapping long expressions over several lines.
class ExprWriter {
 public:
  explicit ExprWriter(std::ostringstream& os) : os_(os) {}
  void term(double coef, const std::string& name) {
    if (count_ > 0 && count_ % 6 == 0) os_ << "\n   ";
    os_ << (coef < 0 ? " - " : " + ") << num(std::abs(coef)) << ' ' << name;
    ++count_;
  }
  int count() const { return count_; }

 private:
  std::ostringstream& os_;
  int count_ = 0;
};

const char* rel_text(Relation r) {
  switch (r) {
    case Relation::kLe: return "<=";
    case Relation::kEq: return "=";
    case Relation::kGe: return ">=";
  }
  return "=";
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw OptError("bad number in solution file: " + s);
  return v;
}

}  // namespace

std::string lp_column_name(int index, std::string_view name) {
  std::string out = "v" + std::to_string(index);
  if (!name.empty()) out.push_back('_');
  for (char c : name.substr(0, 60)) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

LpExport write_lp(const Model& model, QuadMode mode, int pieces) {
  if (pieces < 1) throw OptError("write_lp: pieces must be >= 1");
  LpExport out;
  const auto& vars = model.vars();
  out.names.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    out.names.push_back(lp_column_name(static_cast<int>(j), vars[j].name));
  }

  std::ostringstream os;
  os << "\\ generated by docsdn\n";
  os << "Minimize\n obj:";
  ExprWriter obj(os);
  std::vector<std::pair<double, double>> merged(vars.size(), {0.0, 0.0});
  for (const auto& t : model.linear_objective().terms()) {
    merged[t.var.index].first += t.coef;
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (merged[j].first != 0.0) obj.term(merged[j].first, out.names[j]);
  }

  struct PwTerm {
    std::string name;
    std::string x;
    double lo;
    double width;
  };
  std::vector<PwTerm> pw;
  const auto& quad = model.quadratic_objective();
  if (mode == QuadMode::kPiecewise) {
    for (std::size_t k = 0; k < quad.size(); ++k) {
      const auto& q = quad[k];
      const double lo = std::max(0.0, model.var(q.var).lo);
      if (!std::isfinite(q.range_hi) || q.range_hi < lo) {
        throw OptError("write_lp: piecewise export needs a finite range for " +
                       model.var(q.var).name);
      }
      PwTerm t{"pw" + std::to_string(k) + "_" + out.names[q.var.index],
               out.names[q.var.index], lo, q.range_hi - lo};
      obj.term(q.coef, t.name);
      const double h = t.width / pieces;
      out.piecewise_error_bound += q.coef * h * h / 4.0;
      pw.push_back(std::move(t));
    }
  }
  if (obj.count() == 0 && !vars.empty()) os << " 0 " << out.names[0];
  if (mode == QuadMode::kNative && !quad.empty()) {
    os << "\n   + [";
    int count = 0;
    for (const auto& q : quad) {
      if (count > 0 && count % 6 == 0) os << "\n    ";
      os << (count > 0 ? " + " : " ") << num(2.0 * q.coef) << ' '
         << out.names[q.var.index] << " ^2";
      ++count;
    }
    os << " ] / 2";
  }
  os << "\nSubject To\n";

  int row = 0;
  for (const auto& c : model.constraints()) {
    os << " c" << row++ << ":";
    ExprWriter w(os);
    for (const auto& t : c.expr.terms()) w.term(t.coef, out.names[t.var.index]);
    if (w.count() == 0) os << " 0 " << out.names.at(0);
    os << ' ' << rel_text(c.rel) << ' ' << num(c.rhs) << '\n';
  }
  for (std::size_t k = 0; k < pw.size(); ++k) {
    for (int i = 0; i <= pieces; ++i) {
      const double b = pw[k].lo + pw[k].width * i / pieces;
      // w - 2 b x >= -b^2
      os << " pw" << k << "_" << i << ": + 1 " << pw[k].name << " - "
         << num(2.0 * b) << ' ' << pw[k].x << " >= " << num(-b * b) << '\n';
    }
  }

  os << "Bounds\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].kind == VarKind::kBinary) continue;
    if (std::isinf(vars[j].lo) && std::isinf(vars[j].hi)) {
      os << ' ' << out.names[j] << " free\n";
    } else {
      os << ' ' << num(vars[j].lo) << " <= " << out.names[j]
         << " <= " << num(vars[j].hi) << '\n';
    }
  }
  for (const auto& t : pw) os << " 0 <= " << t.name << " <= inf\n";

  bool any_binary = false;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].kind != VarKind::kBinary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << ' ' << out.names[j] << '\n';
  }
  os << "End\n";
  out.text = os.str();
  return out;
}

ParsedSolution parse_solution(std::string_view text, std::string_view format) {
  ParsedSolution out;
  std::istringstream is{std::string(text)};
  std::string line;
  if (format == "plain") {
    bool saw_status = false;
    while (std::getline(is, line)) {
      auto tok = split_ws(line);
      if (tok.empty() || tok[0][0] == '#') continue;
      if (tok[0] == "status" && tok.size() >= 2) {
        saw_status = true;
        if (tok[1] == "optimal") {
          out.status = SolveStatus::kOptimal;
        } else if (tok[1] == "infeasible") {
          out.status = SolveStatus::kInfeasible;
        } else if (tok[1] == "limit") {
          out.status = SolveStatus::kLimit;
        } else {
          throw OptError("solver reported status '" + tok[1] + "'");
        }
        continue;
      }
      if (tok[0] == "objective" && tok.size() >= 2) {
        out.objective = to_double(tok[1]);
        continue;
      }
      if (tok.size() != 2) throw OptError("bad solution line: " + line);
      out.values[tok[0]] = to_double(tok[1]);
    }
    if (!saw_status) throw OptError("solution file has no status line");
  } else if (format == "cbc") {
    if (!std::getline(is, line)) throw OptError("empty CBC solution file");
    if (line.rfind("Optimal", 0) == 0) {
      out.status = SolveStatus::kOptimal;
    } else if (line.find("nfeasible") != std::string::npos) {
      out.status = SolveStatus::kInfeasible;
    } else if (line.rfind("Stopped", 0) == 0) {
      out.status = SolveStatus::kLimit;
    } else {
      throw OptError("unrecognized CBC status: " + line);
    }
    const auto pos = line.find("objective value");
    if (pos != std::string::npos) {
      auto tok = split_ws(line.substr(pos + 15));
      if (!tok.empty()) out.objective = to_double(tok[0]);
    }
    while (std::getline(is, line)) {
      auto tok = split_ws(line);
      if (!tok.empty() && tok[0] == "**") tok.erase(tok.begin());
      if (tok.size() < 3) continue;
      out.values[tok[1]] = to_double(tok[2]);
    }
  } else {
    throw OptError("unknown solution format: " + std::string(format));
  }
  out.has_point = out.status != SolveStatus::kInfeasible && !out.values.empty();
  return out;
}

}  // namespace docsdn::opt

#include "addcomb/verdict.hpp"

#include <cmath>
#include <cstdio>

namespace addcomb {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::not_applicable:
      return "not_applicable";
  }
  return "?";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::le:
      return "<=";
    case Relation::ge:
      return ">=";
    case Relation::eq:
      return "==";
  }
  return "?";
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double Quantity::approx() const {
  if (const auto* q = std::get_if<Rational>(&value)) return to_double(*q);
  return std::get<double>(value);
}

std::string Quantity::str() const {
  if (const auto* q = std::get_if<Rational>(&value)) return to_string(*q);
  return format_double(std::get<double>(value));
}

const std::string* Verdict::param(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return &v;
  }
  return nullptr;
}

double relative_margin(double lhs, Relation rel, double rhs) {
  const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
  if (scale == 0.0) return 0.0;
  switch (rel) {
    case Relation::le:
      return (rhs - lhs) / scale;
    case Relation::ge:
      return (lhs - rhs) / scale;
    case Relation::eq:
      return -std::fabs(lhs - rhs) / scale;
  }
  return 0.0;
}

bool holds_with_tolerance(double lhs, Relation rel, double rhs, double tol) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  return relative_margin(lhs, rel, rhs) >= -tol;
}

namespace {

double exact_margin(const Rational& lhs, Relation rel, const Rational& rhs) {
  const Rational al = abs(lhs);
  const Rational ar = abs(rhs);
  const Rational scale = al > ar ? al : ar;
  if (scale == 0) return 0.0;
  Rational slack;
  switch (rel) {
    case Relation::le:
      slack = rhs - lhs;
      break;
    case Relation::ge:
      slack = lhs - rhs;
      break;
    case Relation::eq:
      slack = lhs > rhs ? Rational(rhs - lhs) : Rational(lhs - rhs);
      break;
  }
  return to_double(slack / scale);
}

bool exact_holds(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::le:
      return lhs <= rhs;
    case Relation::ge:
      return lhs >= rhs;
    case Relation::eq:
      return lhs == rhs;
  }
  return false;
}

}  // namespace

VerdictBuilder& VerdictBuilder::exact(std::string name, Rational lhs, Relation rel, Rational rhs) {
  const bool ok = exact_holds(lhs, rel, rhs);
  const double m = exact_margin(lhs, rel, rhs);
  entries_.push_back({std::move(name), Quantity{std::move(lhs)}, Quantity{std::move(rhs)}, rel, 0.0, ok, m});
  return *this;
}

VerdictBuilder& VerdictBuilder::approx(std::string name, double lhs, Relation rel, double rhs, double tol) {
  const bool ok = holds_with_tolerance(lhs, rel, rhs, tol);
  const double m = std::isfinite(lhs) && std::isfinite(rhs) ? relative_margin(lhs, rel, rhs) : -1.0;
  entries_.push_back({std::move(name), Quantity{lhs}, Quantity{rhs}, rel, tol, ok, m});
  return *this;
}

VerdictBuilder& VerdictBuilder::note(std::string name, Quantity lhs, Relation rel, Quantity rhs) {
  double m = 0.0;
  if (lhs.exact() && rhs.exact()) {
    m = exact_margin(std::get<Rational>(lhs.value), rel, std::get<Rational>(rhs.value));
  } else {
    m = relative_margin(lhs.approx(), rel, rhs.approx());
  }
  params_.emplace_back("note." + name,
                       lhs.str() + " " + std::string(to_string(rel)) + " " + rhs.str() + " margin=" + format_double(m));
  return *this;
}

VerdictBuilder& VerdictBuilder::param(std::string key, std::string value) {
  params_.emplace_back(std::move(key), std::move(value));
  return *this;
}

VerdictBuilder& VerdictBuilder::witness(std::string key, nlohmann::json value) {
  witness_[std::move(key)] = std::move(value);
  return *this;
}

Verdict VerdictBuilder::build() const {
  Verdict v;
  v.check_id = check_id_;
  if (entries_.empty()) {
    v.pass = Outcome::not_applicable;
    v.params = params_;
    return v;
  }
  std::size_t head = 0;
  bool all_ok = true;
  nlohmann::json failed = nlohmann::json::array();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!entries_[i].holds) {
      if (all_ok) head = i;
      all_ok = false;
      failed.push_back(entries_[i].name);
    } else if (all_ok && entries_[i].margin < entries_[head].margin) {
      head = i;
    }
  }
  const Entry& e = entries_[head];
  v.lhs = e.lhs;
  v.rhs = e.rhs;
  v.margin = e.margin;
  v.pass = all_ok ? Outcome::pass : Outcome::fail;
  v.params.reserve(params_.size() + 4 + (entries_.size() > 1 ? entries_.size() : 0));
  v.params.emplace_back("relation", e.name + " " + std::string(to_string(e.rel)));
  v.params.emplace_back("arith", e.lhs.exact() ? "exact" : "float");
  if (!e.lhs.exact()) v.params.emplace_back("tol", format_double(e.tol));
  if (entries_.size() > 1) {
    for (const auto& s : entries_) {
      v.params.emplace_back("sub." + s.name, s.lhs.str() + " " + std::string(to_string(s.rel)) + " " + s.rhs.str() +
                                                 " margin=" + format_double(s.margin));
    }
  }
  v.params.insert(v.params.end(), params_.begin(), params_.end());
  if (!all_ok) {
    nlohmann::json w = witness_;
    w["failed"] = failed;
    v.witness = std::move(w);
  } else if (!witness_.empty()) {
    v.witness = witness_;
  }
  return v;
}

Verdict not_applicable(std::string check_id, std::string reason) {
  Verdict v;
  v.check_id = std::move(check_id);
  v.pass = Outcome::not_applicable;
  v.params.emplace_back("reason", std::move(reason));
  return v;
}

nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, val] : v.params) params[k] = val;
  nlohmann::ordered_json j;
  j["check_id"] = v.check_id;
  j["group"] = v.group;
  j["set_repr"] = v.set_repr;
  j["params"] = params;
  j["lhs"] = v.lhs.str();
  j["rhs"] = v.rhs.str();
  j["margin"] = std::isfinite(v.margin) ? v.margin : -1.0;
  if (v.pass == Outcome::not_applicable) {
    j["pass"] = "not_applicable";
  } else {
    j["pass"] = v.pass == Outcome::pass;
  }
  j["witness"] = v.witness ? nlohmann::ordered_json::parse(v.witness->dump()) : nlohmann::ordered_json();
  return j;
}

}  // namespace addcomb

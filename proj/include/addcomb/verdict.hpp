#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "addcomb/exact.hpp"
#include "addcomb/setops.hpp"

namespace addcomb {

enum class Outcome { pass, fail, not_applicable };
std::string_view to_string(Outcome o);

enum class Relation { le, ge, eq };
std::string_view to_string(Relation r);

// Either an exact rational or a double. Exact values serialize as "n" or
// "n/d"; doubles as 17 significant digits so they round-trip.
struct Quantity {
  std::variant<Rational, double> value;

  bool exact() const { return std::holds_alternative<Rational>(value); }
  double approx() const;
  std::string str() const;
};

inline constexpr double kDefaultTolerance = 1e-9;

struct CheckOptions {
  double tol = kDefaultTolerance;
  Backend backend = Backend::fast;
};

// One persisted inequality/identity check.
struct Verdict {
  std::string check_id;
  std::string group;     // filled by the harness when the verdict is emitted
  std::string set_repr;  // ditto
  std::vector<std::pair<std::string, std::string>> params;
  Quantity lhs{Rational(0)};
  Quantity rhs{Rational(0)};
  double margin = 0.0;
  Outcome pass = Outcome::not_applicable;
  std::optional<nlohmann::json> witness;

  bool failed() const { return pass == Outcome::fail; }
  const std::string* param(std::string_view key) const;
};

// Field order is fixed: check_id, group, set_repr, params, lhs, rhs, margin, pass, witness.
nlohmann::ordered_json to_json(const Verdict& v);

// Collects one or more named relations. The verdict passes iff every
// relation holds; lhs/rhs report the first failing relation, or the one with
// the smallest margin when all pass.
class VerdictBuilder {
 public:
  explicit VerdictBuilder(std::string check_id) : check_id_(std::move(check_id)) {}

  VerdictBuilder& exact(std::string name, Rational lhs, Relation rel, Rational rhs);
  VerdictBuilder& approx(std::string name, double lhs, Relation rel, double rhs, double tol);
  // Evaluated and recorded in params, but never affects the outcome.
  VerdictBuilder& note(std::string name, Quantity lhs, Relation rel, Quantity rhs);
  VerdictBuilder& param(std::string key, std::string value);
  VerdictBuilder& witness(std::string key, nlohmann::json value);

  Verdict build() const;

 private:
  struct Entry {
    std::string name;
    Quantity lhs, rhs;
    Relation rel;
    double tol;  // 0 for exact
    bool holds;
    double margin;
  };
  std::string check_id_;
  std::vector<Entry> entries_;
  std::vector<std::pair<std::string, std::string>> params_;
  nlohmann::json witness_ = nlohmann::json::object();
};

Verdict not_applicable(std::string check_id, std::string reason);

// Signed relative slack: >= 0 iff the relation holds exactly, scaled by max(|lhs|, |rhs|).
double relative_margin(double lhs, Relation rel, double rhs);
bool holds_with_tolerance(double lhs, Relation rel, double rhs, double tol);

std::string format_double(double x);

}  // namespace addcomb

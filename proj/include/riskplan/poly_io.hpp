#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "riskplan/poly.hpp"

namespace riskplan {

// Canonical human-readable form, terms in descending graded-lex order.
// Coefficients print in shortest round-trip form, so parse(to_string(p)) == p.
std::string to_string(const Polynomial& p);

// Parses expressions over x1..xn, w1..wk, t with + - * ^ and parentheses,
// e.g. "w1^2 - x1^2 - x2^2" or "0.09 - (x1 - (t + 0.4 + w1))^2".
// Variables must belong to the given universe.
Polynomial parse_polynomial(const std::string& text, const Universe& u);

nlohmann::json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const nlohmann::json& j);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace riskplan

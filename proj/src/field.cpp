#include "hexconf/field.hpp"

#include <cmath>
#include <string>

#include "hexconf/error.hpp"

namespace hexconf {

namespace {
std::string describe(LatticeVertex v)
{
    return "(" + std::to_string(v.m) + "," + std::to_string(v.n) + ")";
}
}  // namespace

ConformalField::ConformalField(Ball domain) : domain_(std::move(domain))
{
    for (const auto& v : domain_.vertices()) {
        u_.emplace(v, 0.0);
    }
}

double ConformalField::at(LatticeVertex v) const
{
    const auto it = u_.find(v);
    if (it == u_.end()) {
        throw Error(ErrorKind::domain_error, "vertex " + describe(v) + " outside field domain");
    }
    return it->second;
}

std::optional<double> ConformalField::find(LatticeVertex v) const noexcept
{
    const auto it = u_.find(v);
    if (it == u_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ConformalField::set(LatticeVertex v, double u)
{
    const auto it = u_.find(v);
    if (it == u_.end()) {
        throw Error(ErrorKind::domain_error, "vertex " + describe(v) + " outside field domain");
    }
    it->second = u;
}

std::vector<double> ConformalField::fan_factors(LatticeVertex v) const
{
    std::vector<double> out;
    out.reserve(7);
    out.push_back(at(v));
    for (const auto& w : neighbors(v)) {
        out.push_back(at(w));
    }
    return out;
}

double ConformalField::length(LatticeVertex a, LatticeVertex b) const
{
    if (!adjacent(a, b)) {
        throw Error(ErrorKind::domain_error, describe(a) + " and " + describe(b) + " are not adjacent");
    }
    return std::exp(at(a) + at(b));
}

double gradient(const ConformalField& field, LatticeVertex v, Direction c)
{
    return field.at(v + offset(c)) - field.at(v);
}

}  // namespace hexconf

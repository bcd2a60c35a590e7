#include "sigshift/kinetic_scanner.hpp"

#include <algorithm>
#include <cmath>

namespace sigshift {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-9;
}  // namespace

KineticMaxScanner::KineticMaxScanner(double coef_sq, std::size_t full_scan_budget)
    : coef_sq_(coef_sq), coef_(std::sqrt(coef_sq)), budget_(full_scan_budget) {}

void KineticMaxScanner::clear() {
    stack_.clear();
    history_.clear();
}

double KineticMaxScanner::value(const Candidate& c, double clock) const {
    return -c.key - std::sqrt(coef_sq_ * std::max(0.0, clock - c.origin));
}

double KineticMaxScanner::overtake_clock(const Candidate& older, const Candidate& newer) const {
    const double d = newer.key - older.key;  // v_old - v_new = d - coef (sqrt(X-o1) - sqrt(X-o2))
    const double span = newer.origin - older.origin;
    if (span <= 0.0 || coef_ == 0.0) return d >= 0.0 ? -kInf : kInf;
    if (d <= 0.0) return kInf;
    const double r = coef_ * span / d;
    if (r * r <= span) return newer.origin;
    const double root = (r * r - span) / (2.0 * r);
    return newer.origin + root * root;
}

void KineticMaxScanner::push(double key, double origin) {
    Candidate fresh{key, origin, kInf};
    history_.push_back(fresh);
    if (!stack_.empty() && value(stack_.back(), origin) >= value(fresh, origin)) return;
    while (!stack_.empty()) {
        fresh.overtaken_at = overtake_clock(stack_.back(), fresh);
        if (stack_.size() >= 2 && stack_.back().overtaken_at <= fresh.overtaken_at) {
            stack_.pop_back();
            continue;
        }
        break;
    }
    if (stack_.empty()) fresh.overtaken_at = kInf;
    stack_.push_back(fresh);
}

double KineticMaxScanner::max_value(double clock) {
    while (stack_.size() >= 2 && stack_.back().overtaken_at <= clock) stack_.pop_back();
    return value(stack_.back(), clock);
}

double KineticMaxScanner::max_value_full(double clock) const {
    double best = -kInf;
    for (const auto& c : history_) best = std::max(best, value(c, clock));
    return best;
}

bool KineticMaxScanner::reaches(double offset, double clock, bool strict) {
    max_value(clock);
    const auto margin_of = [&](const Candidate& c) {
        return (offset - c.key) - std::sqrt(coef_sq_ * std::max(0.0, clock - c.origin));
    };
    double margin = margin_of(stack_.back());
    const double scale = std::abs(offset) + std::abs(stack_.back().key) + 1.0;
    if (std::abs(margin) <= kTieTolerance * scale && full_scans_ < budget_) {
        ++full_scans_;
        for (const auto& c : history_) margin = std::max(margin, margin_of(c));
    }
    return strict ? margin > 0.0 : margin >= 0.0;
}

}  // namespace sigshift

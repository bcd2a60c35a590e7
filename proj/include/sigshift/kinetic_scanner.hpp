#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace sigshift {

// Running maximum of  v_j(X) = -key_j - sqrt(coef_sq * (X - origin_j))  over candidates j
// pushed with nondecreasing origins, queried at nondecreasing clocks X.
//
// For origin_1 < origin_2 the difference v_1 - v_2 is nondecreasing in X, so an older
// candidate that catches up with a newer one stays ahead. The scanner keeps the upper
// envelope as a stack ordered by origin whose adjacent overtaking clocks decrease toward
// the top; the top is the current maximum. Amortized O(1) per push and query.
//
// Decisions whose margin is within floating noise are re-evaluated by a full scan over
// every candidate pushed since clear(), up to `full_scan_budget` times.
class KineticMaxScanner {
public:
    explicit KineticMaxScanner(double coef_sq, std::size_t full_scan_budget = 4096);

    void clear();
    void push(double key, double origin);
    bool empty() const noexcept { return stack_.empty(); }
    std::size_t envelope_size() const noexcept { return stack_.size(); }

    // max_j v_j(clock); requires a non-empty scanner.
    double max_value(double clock);
    // Same maximum by enumerating every candidate.
    double max_value_full(double clock) const;

    // offset + max_j v_j(clock) >= 0 (or > 0 when strict), with the near-tie fallback.
    bool reaches(double offset, double clock, bool strict);

    std::size_t full_scans() const noexcept { return full_scans_; }

private:
    struct Candidate {
        double key;
        double origin;
        double overtaken_at;  // clock at which the element below overtakes this one
    };

    double value(const Candidate& c, double clock) const;
    double overtake_clock(const Candidate& older, const Candidate& newer) const;

    double coef_sq_;
    double coef_;
    std::size_t budget_;
    std::size_t full_scans_ = 0;
    std::vector<Candidate> stack_;
    std::vector<Candidate> history_;
};

}  // namespace sigshift

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sigshift/environment.hpp"
#include "sigshift/errors.hpp"
#include "sigshift/format.hpp"

namespace sigshift {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

EnvironmentModel load_csv(const std::filesystem::path& path, NoiseModel noise) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty file " + path.string(), 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,arm,mean") throw ParseError("expected header `t,arm,mean`", lineno);

    struct Row {
        Round t;
        std::size_t arm;
        double mean;
        long line;
    };
    std::vector<Row> rows;
    Round max_t = 0;
    std::size_t max_arm = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != 3) throw ParseError("expected 3 cells", lineno);
        Row row{0, 0, 0.0, lineno};
        if (!parse_number(cells[0], row.t) || row.t < 1) throw ParseError("bad round", lineno);
        if (!parse_number(cells[1], row.arm) || row.arm < 1) throw ParseError("bad arm", lineno);
        if (!parse_number(cells[2], row.mean) || !std::isfinite(row.mean))
            throw ParseError("mean is not a finite number", lineno);
        max_t = std::max(max_t, row.t);
        max_arm = std::max(max_arm, row.arm);
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError("no data rows in " + path.string());

    const std::size_t K = max_arm;
    const auto T = static_cast<std::size_t>(max_t);
    std::vector<double> table(K * T, 0.0);
    std::vector<char> seen(K * T, 0);
    std::vector<char> round_seen(T, 0);
    for (const auto& row : rows) {
        const std::size_t i = static_cast<std::size_t>(row.t - 1) * K + (row.arm - 1);
        if (seen[i]) throw ParseError("duplicate cell (t=" + std::to_string(row.t) +
                                          ", arm=" + std::to_string(row.arm) + ")",
                                      row.line);
        seen[i] = 1;
        round_seen[static_cast<std::size_t>(row.t - 1)] = 1;
        table[i] = row.mean;
    }
    for (std::size_t t = 0; t < T; ++t) {
        if (!round_seen[t])
            throw ParseError("non-contiguous rounds: round " + std::to_string(t + 1) + " has no rows");
        for (std::size_t a = 0; a < K; ++a)
            if (!seen[t * K + a])
                throw ParseError("missing cell (t=" + std::to_string(t + 1) +
                                 ", arm=" + std::to_string(a + 1) + ")");
    }
    return EnvironmentModel::dense(K, max_t, std::move(table), noise, "csv(" + path.string() + ")");
}

void export_csv(const EnvironmentModel& env, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::string buf = "t,arm,mean\n";
    for (Round t = 1; t <= env.horizon(); ++t) {
        for (Arm a = 0; a < env.arms(); ++a) {
            buf += std::to_string(t);
            buf += ',';
            buf += std::to_string(a + 1);
            buf += ',';
            buf += format_double(env.mean(t, a));
            buf += '\n';
        }
        if (buf.size() > (1u << 20)) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sigshift

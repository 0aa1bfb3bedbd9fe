#include "ivo/grid_env.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace ivo {

GridConfig GridConfig::from_lines(std::vector<std::string> lines) {
    GridConfig cfg;
    cfg.rows = std::move(lines);
    cfg.validate();
    return cfg;
}

GridConfig GridConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("grid: cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return from_lines(std::move(lines));
}

void GridConfig::validate() const {
    if (rows.empty()) throw std::invalid_argument("grid: empty layout");
    int starts = 0, goals = 0;
    for (const auto& row : rows) {
        if (row.size() != rows[0].size())
            throw std::invalid_argument("grid: rows must have equal length");
        for (char c : row) {
            if (c == 'x') ++starts;
            else if (c == 'G') ++goals;
            else if (c != '.' && c != 'R')
                throw std::invalid_argument(std::string("grid: unknown cell '") + c + "'");
        }
    }
    if (starts != 1) throw std::invalid_argument("grid: need exactly one start cell 'x'");
    if (goals < 1) throw std::invalid_argument("grid: need at least one goal cell 'G'");
    if (!(noise_prob >= 0.0 && noise_prob < 1.0))
        throw std::invalid_argument("grid: noise_prob must be in [0,1)");
    if (max_steps < 1) throw std::invalid_argument("grid: max_steps must be >= 1");
}

GridEnv::GridEnv(GridConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    n_rows_ = static_cast<int>(cfg_.rows.size());
    n_cols_ = static_cast<int>(cfg_.rows[0].size());
    kinds_.resize(n_states());
    start_ = -1;
    for (int r = 0; r < n_rows_; ++r)
        for (int c = 0; c < n_cols_; ++c) {
            const char ch = cfg_.rows[r][c];
            CellKind kind = CellKind::empty;
            if (ch == 'x') {
                kind = CellKind::start;
                start_ = cell_index(r, c);
            } else if (ch == 'G') {
                kind = CellKind::goal;
            } else if (ch == 'R') {
                kind = CellKind::obstacle;
            }
            kinds_[cell_index(r, c)] = kind;
        }
    initial_ = {{start_, 1.0}};

    // Precompute the exact outcome law of every (cell, action): the executed
    // direction is the chosen one with probability 1-p (plus p/8 if the
    // random draw may coincide), otherwise uniform; landings are merged.
    outcomes_.assign(n_states(), {});
    const double p = cfg_.noise_prob;
    for (int s = 0; s < n_states(); ++s) {
        outcomes_[s].assign(kActions, {});
        if (terminal_state(s)) continue;
        for (int a = 0; a < kActions; ++a) {
            std::map<int, double> landing;
            for (int d = 0; d < kActions; ++d) {
                double prob;
                if (cfg_.noise_includes_chosen)
                    prob = (d == a ? 1.0 - p : 0.0) + p / kActions;
                else
                    prob = d == a ? 1.0 - p : p / (kActions - 1);
                if (prob > 0.0) landing[move(s, d)] += prob;
            }
            for (const auto& [cell, prob] : landing) {
                double reward = cfg_.step_reward;
                if (kind(cell) == CellKind::goal) reward = cfg_.goal_reward;
                else if (kind(cell) == CellKind::obstacle) reward = cfg_.obstacle_reward;
                outcomes_[s][a].push_back({prob, cell, reward});
            }
        }
    }
}

int GridEnv::move(int state, int direction) const {
    const int r = row_of(state) + kRowDelta[direction];
    const int c = col_of(state) + kColDelta[direction];
    if (r < 0 || r >= n_rows_ || c < 0 || c >= n_cols_) return state;  // the state is unaffected
    return cell_index(r, c);
}

std::vector<int> most_likely_path(const GridEnv& env, const Policy& policy) {
    std::vector<int> cells{env.start_state()};
    for (int i = 0; i < env.config().max_steps; ++i) {
        const int s = cells.back();
        if (env.terminal_state(s)) break;
        const int a = static_cast<int>(policy.mode_action(i, {static_cast<double>(s)}));
        cells.push_back(env.move(s, a));
    }
    return cells;
}

}  // namespace ivo

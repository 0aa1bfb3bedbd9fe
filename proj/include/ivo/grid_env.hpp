#pragma once

#include <string>
#include <vector>

#include "ivo/env.hpp"
#include "ivo/policy.hpp"

namespace ivo {

enum class CellKind { empty, start, goal, obstacle };

/// Grid layout loaded from plain text: one row per line, characters
/// '.' (empty), 'x' (start), 'G' (goal, terminal +goal_reward),
/// 'R' (obstacle, terminal +obstacle_reward).
struct GridConfig {
    std::vector<std::string> rows;
    double step_reward = -1.0;
    double goal_reward = 35.0;
    double obstacle_reward = -35.0;
    int max_steps = 35;
    double noise_prob = 0.08;
    double gamma = 1.0;
    /// Whether the action drawn under noise may coincide with the chosen one
    /// (effective compliance 1 - p + p/8) or is forced to differ.
    bool noise_includes_chosen = true;

    static GridConfig from_lines(std::vector<std::string> lines);
    static GridConfig from_file(const std::string& path);
    void validate() const;
};

/// Eight-direction grid world with action noise; moves off the grid leave
/// the state unchanged. Terminal cells end the episode with their own
/// reward; every other step costs `step_reward`. Episodes are capped at
/// `max_steps`.
class GridEnv : public TabularEnv {
  public:
    // Action order fixes value-iteration tie-breaks: N, S, E, W, NE, NW, SE, SW.
    static constexpr int kActions = 8;
    static constexpr int kRowDelta[kActions] = {-1, 1, 0, 0, -1, -1, 1, 1};
    static constexpr int kColDelta[kActions] = {0, 0, 1, -1, 1, -1, 1, -1};

    explicit GridEnv(GridConfig cfg);

    int n_states() const override { return n_rows_ * n_cols_; }
    int n_actions() const override { return kActions; }
    int horizon() const override { return cfg_.max_steps; }
    const std::vector<std::pair<int, double>>& initial_distribution() const override { return initial_; }
    const std::vector<Outcome>& outcomes(int step, int state, int action) const override {
        (void)step;  // dynamics are time-homogeneous; only the horizon cap is not
        return outcomes_[state][action];
    }
    bool terminal_state(int state) const override {
        return kind(state) == CellKind::goal || kind(state) == CellKind::obstacle;
    }

    const GridConfig& config() const { return cfg_; }
    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }
    int cell_index(int row, int col) const { return row * n_cols_ + col; }
    int row_of(int state) const { return state / n_cols_; }
    int col_of(int state) const { return state % n_cols_; }
    CellKind kind(int state) const { return kinds_[state]; }
    int start_state() const { return start_; }

    /// Landing cell for one executed direction (off-grid moves stay put).
    int move(int state, int direction) const;

  private:
    GridConfig cfg_;
    int n_rows_, n_cols_, start_;
    std::vector<CellKind> kinds_;
    std::vector<std::pair<int, double>> initial_;
    std::vector<std::vector<std::vector<Outcome>>> outcomes_;
};

/// Cells visited when noise never triggers and the policy's modal action is
/// taken at every step; starts at the start cell and ends at a terminal cell
/// or after max_steps.
std::vector<int> most_likely_path(const GridEnv& env, const Policy& policy);

}  // namespace ivo

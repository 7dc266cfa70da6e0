#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uavbs/coverage.hpp"
#include "uavbs/discovery.hpp"
#include "uavbs/rng.hpp"
#include "uavbs/types.hpp"

namespace uavbs {

/// Lattice moves. Axis convention: front/back along x, left/right along y,
/// higher/lower along z.
enum class Action : int { front = 0, back, left, right, higher, lower, hover };

inline constexpr int kActionCount = 7;

Cell action_delta(Action a);
std::string_view action_name(Action a);

struct AgentHyperparams {
    double lr = 0.5;
    double gamma = 0.9;
    double epsilon = 0.9;
    double decay = 0.999;
    double epsilon_min = 0.01;
    int battery = 300;               // steps per episode
    double rate_threshold = 0.1e6;   // bit/s
    bool decay_per_step = false;

    void validate() const;
    bool operator==(const AgentHyperparams&) const = default;
};

/// Sparse Q-table keyed by lattice cell. Missing rows read as zero.
class QTable {
public:
    using Row = std::array<double, kActionCount>;

    const Row& row(const Cell& s) const;
    double value(const Cell& s, Action a) const { return row(s)[std::size_t(a)]; }
    double& at(const Cell& s, Action a) { return table_[s][std::size_t(a)]; }
    double max_value(const Cell& s) const;

    /// argmax over actions; the lowest action code wins ties.
    Action greedy(const Cell& s) const;

    std::size_t size() const { return table_.size(); }
    const std::unordered_map<Cell, Row, CellHash, CellEqual>& entries() const { return table_; }

private:
    std::unordered_map<Cell, Row, CellHash, CellEqual> table_;
};

/// Q(s,a) += lr * (r + gamma * max_a' Q(s',a') - Q(s,a)); the bootstrap term
/// is dropped on terminal transitions.
void q_update(QTable& table, const Cell& s, Action a, double r, const Cell& s_next, double lr, double gamma,
              bool terminal = false);

/// 0 when every member is served, otherwise served/total - 1.
double reward(int served, int total);

Cell apply_action(const Cell& s, Action a, const CellBox& workspace);

/// Agents are processed in index order. A proposal equal to an earlier
/// agent's final cell is replaced by the agent's current cell. If that
/// current cell is itself claimed by an earlier mover, the mover is sent back
/// too, repeating until all final cells differ (given distinct current cells).
std::vector<Cell> resolve_collisions(std::span<const Cell> proposed, std::span<const Cell> current);

struct Agent {
    int id = 0;
    CellBox workspace;
    int member_total = 0;
    QTable q;
    Cell position = Cell::Zero();
    double epsilon = 0.9;
    Rng action_rng;
    Rng start_rng;
};

/// Epsilon-greedy: greedy with probability 1 - eps + eps/k, each other action eps/k.
Action select_action(Agent& agent, const Cell& state);

void decay_epsilon(Agent& agent, const AgentHyperparams& hp);

struct EpisodeMetrics {
    int episode = 0;
    std::vector<double> agent_reward; // cumulative over the episode
    std::vector<double> step_system_reward;
    double system_reward = 0.0;       // sum of step_system_reward
    int steps = 0;
    double coverage = 0.0;            // served / total at the final step
    double epsilon = 0.0;             // exploration rate in effect (agent 0)
};

struct StepTrace {
    int step = 0;
    std::span<const Cell> current;
    std::span<const Cell> proposed;
    std::span<const Cell> final_cells;
    std::span<const double> rewards;
    double system_reward = 0.0;
};

/// Independent Q-learners sharing one coverage model. Each episode restarts
/// the UAVs at fresh random cells of their workspaces.
class Trainer {
public:
    Trainer(const CoverageModel& model, const std::vector<Assignment>& assignments, AgentHyperparams hp,
            std::uint64_t seed);

    EpisodeMetrics run_episode(int index, const std::function<void(const StepTrace&)>& observer = {});

    /// Follows the greedy policy without learning; returns steps until every
    /// agent is at reward 0, or -1 if `max_steps` pass first.
    int greedy_steps_to_cover(std::span<const Cell> start, int max_steps);

    const std::vector<Agent>& agents() const { return agents_; }
    std::vector<Agent>& agents() { return agents_; }
    const AgentHyperparams& hyperparams() const { return hp_; }

private:
    std::vector<Cell> initial_cells();

    const CoverageModel* model_;
    AgentHyperparams hp_;
    std::vector<Agent> agents_;
    CoverageModel::Evaluator eval_;
};

} // namespace uavbs

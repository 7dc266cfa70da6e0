#include "uavbs/agents.hpp"

#include <algorithm>
#include <string>

namespace uavbs {

Cell action_delta(Action a)
{
    switch (a) {
    case Action::front: return Cell(1, 0, 0);
    case Action::back: return Cell(-1, 0, 0);
    case Action::left: return Cell(0, 1, 0);
    case Action::right: return Cell(0, -1, 0);
    case Action::higher: return Cell(0, 0, 1);
    case Action::lower: return Cell(0, 0, -1);
    case Action::hover: break;
    }
    return Cell::Zero();
}

std::string_view action_name(Action a)
{
    static constexpr std::string_view names[] = {"front", "back", "left", "right", "higher", "lower", "hover"};
    return names[int(a)];
}

void AgentHyperparams::validate() const
{
    if (!(lr > 0.0 && lr <= 1.0))
        throw ConfigError("agent.lr must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw ConfigError("agent.gamma must lie in [0, 1)");
    if (!(epsilon_min >= 0.0 && epsilon_min <= 1.0))
        throw ConfigError("agent.epsilon_min must lie in [0, 1]");
    if (!(epsilon >= epsilon_min && epsilon <= 1.0))
        throw ConfigError("agent.epsilon must lie in [epsilon_min, 1]");
    if (!(decay > 0.0 && decay <= 1.0))
        throw ConfigError("agent.decay must lie in (0, 1]");
    if (battery < 1)
        throw ConfigError("agent.battery must be at least 1");
    if (!(rate_threshold >= 0.0))
        throw ConfigError("agent.rate_threshold must be non-negative");
}

const QTable::Row& QTable::row(const Cell& s) const
{
    static const Row zero{};
    const auto it = table_.find(s);
    return it == table_.end() ? zero : it->second;
}

double QTable::max_value(const Cell& s) const
{
    const Row& r = row(s);
    return *std::max_element(r.begin(), r.end());
}

Action QTable::greedy(const Cell& s) const
{
    const Row& r = row(s);
    // max_element returns the first maximum, i.e. the lowest code.
    return Action(std::max_element(r.begin(), r.end()) - r.begin());
}

void q_update(QTable& table, const Cell& s, Action a, double r, const Cell& s_next, double lr, double gamma,
              bool terminal)
{
    const double future = terminal ? 0.0 : gamma * table.max_value(s_next);
    double& q = table.at(s, a);
    q += lr * (r + future - q);
}

double reward(int served, int total)
{
    if (total < 1)
        throw std::invalid_argument("reward: cluster must have at least one member");
    if (served >= total)
        return 0.0;
    return double(served) / double(total) - 1.0;
}

Cell apply_action(const Cell& s, Action a, const CellBox& workspace)
{
    const Cell next = s + action_delta(a);
    return workspace.contains(next) ? next : s;
}

std::vector<Cell> resolve_collisions(std::span<const Cell> proposed, std::span<const Cell> current)
{
    if (proposed.size() != current.size())
        throw std::invalid_argument("resolve_collisions: size mismatch");
    const std::size_t n = proposed.size();
    std::vector<Cell> out(proposed.begin(), proposed.end());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (out[i] == out[j]) {
                out[i] = current[i];
                break;
            }

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (out[i] != out[j])
                    continue;
                const bool i_stays = out[i] == current[i];
                const bool j_stays = out[j] == current[j];
                if (i_stays == j_stays)
                    continue; // only possible when current cells already coincide
                (i_stays ? out[j] : out[i]) = i_stays ? current[j] : current[i];
                changed = true;
            }
    }
    return out;
}

Action select_action(Agent& agent, const Cell& state)
{
    if (agent.action_rng.uniform() < agent.epsilon)
        return Action(agent.action_rng.below(kActionCount));
    return agent.q.greedy(state);
}

void decay_epsilon(Agent& agent, const AgentHyperparams& hp)
{
    agent.epsilon = std::max(agent.epsilon * hp.decay, hp.epsilon_min);
}

Trainer::Trainer(const CoverageModel& model, const std::vector<Assignment>& assignments, AgentHyperparams hp,
                 std::uint64_t seed)
    : model_(&model), hp_(hp), eval_(model)
{
    hp_.validate();
    if (assignments.size() != model.uav_count())
        throw InvariantError("one assignment per UAV required");
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        Agent a;
        a.id = int(i);
        a.workspace = assignments[i].workspace;
        a.member_total = model.member_count(i);
        a.epsilon = hp_.epsilon;
        a.action_rng = Rng(derive_seed(seed, Stream::action, std::uint32_t(i)));
        a.start_rng = Rng(derive_seed(seed, Stream::initial_position, std::uint32_t(i)));
        a.position = assignments[i].initial;
        agents_.push_back(std::move(a));
    }
}

std::vector<Cell> Trainer::initial_cells()
{
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        Agent& a = agents_[i];
        const auto taken =
            std::count_if(cells.begin(), cells.end(), [&](const Cell& c) { return a.workspace.contains(c); });
        if (taken >= cell_count(a.workspace))
            throw InvariantError("workspace too small for distinct UAV positions");
        Cell c;
        do {
            c = random_cell(a.start_rng, a.workspace);
        } while (std::find(cells.begin(), cells.end(), c) != cells.end());
        cells.push_back(c);
    }
    return cells;
}

EpisodeMetrics Trainer::run_episode(int index, const std::function<void(const StepTrace&)>& observer)
{
    const std::size_t n = agents_.size();
    EpisodeMetrics m;
    m.episode = index;
    m.agent_reward.assign(n, 0.0);
    m.epsilon = n ? agents_[0].epsilon : 0.0;

    std::vector<Cell> current = initial_cells();
    for (std::size_t i = 0; i < n; ++i)
        agents_[i].position = current[i];

    std::vector<Cell> proposed(n);
    std::vector<Action> actions(n);
    std::vector<double> rewards(n, 0.0);
    std::vector<int> counts = eval_.served_counts(current);

    auto all_covered = [&](const std::vector<int>& c) {
        for (std::size_t i = 0; i < n; ++i)
            if (c[i] < agents_[i].member_total)
                return false;
        return true;
    };

    bool done = all_covered(counts);
    for (int t = 0; t < hp_.battery && !done; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            actions[i] = select_action(agents_[i], current[i]);
            proposed[i] = apply_action(current[i], actions[i], agents_[i].workspace);
        }
        const std::vector<Cell> next = resolve_collisions(proposed, current);
        counts = eval_.served_counts(next);

        double r_sys = 0.0;
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            rewards[i] = reward(counts[i], agents_[i].member_total);
            r_sys += rewards[i];
            done = done && rewards[i] == 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            q_update(agents_[i].q, current[i], actions[i], rewards[i], next[i], hp_.lr, hp_.gamma, done);
            m.agent_reward[i] += rewards[i];
            if (hp_.decay_per_step)
                decay_epsilon(agents_[i], hp_);
        }
        m.step_system_reward.push_back(r_sys);
        m.system_reward += r_sys;
        m.steps = t + 1;

        if (observer)
            observer(StepTrace{t, current, proposed, next, rewards, r_sys});
        current = next;
        for (std::size_t i = 0; i < n; ++i)
            agents_[i].position = current[i];
    }

    int served = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        served += counts[i];
        total += agents_[i].member_total;
    }
    m.coverage = total ? double(served) / double(total) : 1.0;
    if (!hp_.decay_per_step)
        for (auto& a : agents_)
            decay_epsilon(a, hp_);
    return m;
}

int Trainer::greedy_steps_to_cover(std::span<const Cell> start, int max_steps)
{
    const std::size_t n = agents_.size();
    if (start.size() != n)
        throw std::invalid_argument("greedy_steps_to_cover: one start cell per agent required");
    std::vector<Cell> current(start.begin(), start.end());
    std::vector<Cell> proposed(n);
    auto covered = [&](const std::vector<int>& c) {
        for (std::size_t i = 0; i < n; ++i)
            if (c[i] < agents_[i].member_total)
                return false;
        return true;
    };
    if (covered(eval_.served_counts(current)))
        return 0;
    for (int t = 0; t < max_steps; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            proposed[i] = apply_action(current[i], agents_[i].q.greedy(current[i]), agents_[i].workspace);
        current = resolve_collisions(proposed, current);
        if (covered(eval_.served_counts(current)))
            return t + 1;
    }
    return -1;
}

} // namespace uavbs

#include <setcd/engine.hpp>

namespace setcd {

std::string_view to_string(Rule rule)
{
    return rule == Rule::Uniform ? "su" : "sgs";
}

Rule parse_rule(std::string_view name)
{
    if (name == "su" || name == "SU" || name == "uniform") return Rule::Uniform;
    if (name == "sgs" || name == "SGS" || name == "gs") return Rule::GaussSouthwell;
    throw Error(ErrorKind::InvalidConfig, "unknown algorithm '" + std::string(name) + "'");
}

int select_uniform(Rng& rng, const SetSystem& sets, int node)
{
    const auto& set = sets.sets.at(node);
    if (set.empty()) throw Error(ErrorKind::IsolatedNode, "node " + std::to_string(node));
    std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
    return set[pick(rng)];
}

} // namespace setcd

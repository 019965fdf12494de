#include "evalgame/ttable.hpp"

#include <numeric>

namespace evalgame {

std::vector<Placement> CompactLine::to_placements(const Expression& expr) const {
    std::vector<Placement> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        out.push_back({steps[i].digit, expr.variables().at(static_cast<std::size_t>(steps[i].variable))});
    return out;
}

std::vector<std::size_t> sorted_variable_rank(const Expression& expr) {
    const auto& vars = expr.variables();
    std::vector<std::size_t> by_name(vars.size());
    std::iota(by_name.begin(), by_name.end(), 0);
    std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
    std::vector<std::size_t> rank(vars.size());
    for (std::size_t r = 0; r < by_name.size(); ++r)
        rank[by_name[r]] = r;
    return rank;
}

PositionKey PositionKey::from_digits(const std::vector<std::size_t>& sorted_rank,
                                     std::span<const std::int8_t> digits) {
    if (digits.size() > kMaxVariables)
        throw std::out_of_range("too many variables for a position key");
    static constexpr auto powers = [] {
        std::array<std::uint64_t, kMaxVariables> p{};
        p[0] = 1;
        for (std::size_t i = 1; i < p.size(); ++i)
            p[i] = p[i - 1] * 11;
        return p;
    }();
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (digits[i] >= 0)
            code += static_cast<std::uint64_t>(digits[i] + 1) * powers[sorted_rank[i]];
    return PositionKey(code);
}

std::vector<std::pair<std::string, int>> PositionKey::bindings(const Expression& expr) const {
    auto rank = sorted_variable_rank(expr);
    std::vector<std::string> by_rank(rank.size());
    for (std::size_t i = 0; i < rank.size(); ++i)
        by_rank[rank[i]] = expr.variables()[i];
    std::vector<std::pair<std::string, int>> out;
    std::uint64_t c = code_;
    for (std::size_t r = 0; r < by_rank.size(); ++r, c /= 11)
        if (c % 11 != 0)
            out.emplace_back(by_rank[r], static_cast<int>(c % 11) - 1);
    return out;
}

PositionKey canonical_key(const Position& pos) {
    if (pos.is_min_node())
        throw NotMaxNode("transposition keys exist only for MAX positions");
    auto digits = pos.digits();
    return PositionKey::from_digits(sorted_variable_rank(pos.expr()), digits);
}

const TTEntry* TranspositionTable::lookup(const PositionKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool TranspositionTable::store(const PositionKey& key, TTEntry entry) {
    if (capacity_ && entries_.size() >= *capacity_ && !entries_.contains(key)) {
        ++rejected_;
        return false;
    }
    entries_.insert_or_assign(key, std::move(entry));
    return true;
}

void TranspositionTable::clear() {
    entries_.clear();
    rejected_ = 0;
    expression_.clear();
}

void TranspositionTable::bind_expression(const std::string& source) {
    if (expression_.empty()) {
        expression_ = source;
        return;
    }
    if (expression_ != source)
        throw std::invalid_argument("transposition table belongs to '" + expression_ + "', not '" + source + "'");
}

}  // namespace evalgame

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evalgame/rational.hpp"
#include "evalgame/tree.hpp"

namespace evalgame {

class NotMaxNode : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Fixed-capacity move line used inside the search, with variables held as
/// indices into Expression::variables().
struct CompactLine {
    struct Step {
        std::int8_t digit;
        std::int8_t variable;
        friend bool operator==(const Step&, const Step&) = default;
    };

    std::array<Step, kMaxVariables> steps{};
    std::uint8_t size = 0;

    void clear() { size = 0; }
    /// Replaces this line with `head` followed by `tail`.
    void assign(Step head, const CompactLine& tail) {
        steps[0] = head;
        std::copy(tail.steps.begin(), tail.steps.begin() + tail.size, steps.begin() + 1);
        size = static_cast<std::uint8_t>(tail.size + 1);
    }

    std::vector<Placement> to_placements(const Expression& expr) const;

    friend bool operator==(const CompactLine& a, const CompactLine& b) {
        return a.size == b.size && std::equal(a.steps.begin(), a.steps.begin() + a.size, b.steps.begin());
    }
};

/// Order-independent identity of a MAX position: its (variable, digit)
/// bindings sorted by variable name, packed one base-11 slot per variable
/// (0 = unbound, d + 1 = digit d).
class PositionKey {
public:
    PositionKey() = default;

    /// Slot layout is the name-sorted rank of each variable of `expr`.
    static PositionKey from_digits(const std::vector<std::size_t>& sorted_rank,
                                   std::span<const std::int8_t> digits);

    std::uint64_t code() const { return code_; }
    /// The bindings in name order.
    std::vector<std::pair<std::string, int>> bindings(const Expression& expr) const;

    friend bool operator==(const PositionKey&, const PositionKey&) = default;

private:
    explicit PositionKey(std::uint64_t code) : code_(code) {}
    std::uint64_t code_ = 0;
};

/// rank[i] = position of variables()[i] when the names are sorted.
std::vector<std::size_t> sorted_variable_rank(const Expression& expr);

/// Throws NotMaxNode if a digit is pending.
PositionKey canonical_key(const Position& pos);

struct TTEntry {
    Value value;
    CompactLine pv_suffix;
};

}  // namespace evalgame

template <>
struct std::hash<evalgame::PositionKey> {
    std::size_t operator()(const evalgame::PositionKey& k) const noexcept {
        // splitmix64 finalizer
        std::uint64_t z = k.code() + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};

namespace evalgame {

/// Memo of fully evaluated MAX positions for one expression. Unbounded
/// unless a capacity is given; once full, further stores are rejected.
class TranspositionTable {
public:
    TranspositionTable() = default;
    explicit TranspositionTable(std::size_t capacity) : capacity_(capacity) {}

    const TTEntry* lookup(const PositionKey& key) const;
    /// Returns false when the table is full (the entry is dropped).
    bool store(const PositionKey& key, TTEntry entry);

    std::size_t size() const { return entries_.size(); }
    const std::unordered_map<PositionKey, TTEntry>& entries() const { return entries_; }
    std::optional<std::size_t> capacity() const { return capacity_; }
    std::uint64_t rejected() const { return rejected_; }
    void clear();

    /// Source text of the expression this table holds positions for; empty
    /// until the first solve claims the table.
    const std::string& expression() const { return expression_; }
    /// Claims the table for `source`. Throws std::invalid_argument if it
    /// already belongs to a different expression.
    void bind_expression(const std::string& source);

private:
    std::string expression_;
    std::unordered_map<PositionKey, TTEntry> entries_;
    std::optional<std::size_t> capacity_;
    std::uint64_t rejected_ = 0;
};

}  // namespace evalgame

#pragma once

#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cpbpv/constraint.hpp"

namespace cpbpv {

/// A growing conjunction of constraints with checkpoint/rollback. Append-only
/// between checkpoints; rolling back truncates to the exact prefix that was
/// present when the checkpoint was taken.
class ConstraintStore {
public:
    void post(SConPtr c) { items_.push_back(std::move(c)); }

    size_t size() const { return items_.size(); }
    const SConPtr& at(size_t i) const { return items_[i]; }

    std::span<const SConPtr> view() const { return {items_.data(), items_.size()}; }

    // stack discipline
    void checkpoint() { marks_.push_back(items_.size()); }

    void rollback() {
        if (marks_.empty()) throw VerifyError("rollback without checkpoint");
        items_.resize(marks_.back());
        marks_.pop_back();
    }

    // explicit marks, used by the executor's worklist
    size_t mark() const { return items_.size(); }

    void rollback_to(size_t mark) {
        if (mark > items_.size()) throw VerifyError("rollback past the end of the store");
        items_.resize(mark);
        while (!marks_.empty() && marks_.back() > mark) marks_.pop_back();
    }

    /// Canonical text form: one constraint per line, in posting order.
    std::string to_text() const {
        std::ostringstream os;
        for (const auto& c : items_) os << to_string(c) << "\n";
        return os.str();
    }

private:
    std::vector<SConPtr> items_;
    std::vector<size_t> marks_;
};

}  // namespace cpbpv

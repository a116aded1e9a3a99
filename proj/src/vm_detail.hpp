#pragma once

#include "novlex/vm.hpp"

namespace novlex::detail {

/// Upper bound on string, vector and print-buffer lengths produced by instructions.
inline constexpr std::size_t max_sequence_length = 5000;

/// Splits sequence items until the top `n` logical exec entries (or all of
/// them, if fewer) are single items.
inline void expose(VmState& s, std::size_t n)
{
    if (s.exec.empty()) {
        return;
    }
    ExecItem& top = s.exec.back();
    if (top.kind == ExecItem::Kind::sequence) {
        ExecItem first;
        first.node = top.node;
        if (top.end == 1) {
            top = first;
        } else {
            ++top.node;
            --top.end;
            s.exec.push_back(first);
        }
    }
    if (n > 1 && s.exec.size() > 1) {
        ExecItem saved = s.exec.back();
        s.exec.pop_back();
        expose(s, n - 1);
        s.exec.push_back(saved);
    }
}

void step_range(VmState& s, const ExecItem& item);
void step_times(VmState& s, const ExecItem& item);
void step_iterate(VmState& s, const ExecItem& item);

} // namespace novlex::detail

#include "novlex/vm.hpp"

#include "novlex/errors.hpp"
#include "vm_detail.hpp"

namespace novlex {

void ExecutionLimits::validate() const
{
    if (step_limit == 0 || max_genome_size == 0 || max_initial_genome_size == 0) {
        throw ConfigError("execution limits must be strictly positive");
    }
}

void VmState::clear()
{
    exec.clear();
    integer.clear();
    floating.clear();
    boolean.clear();
    string.clear();
    vector_integer.clear();
    vector_float.clear();
    print_buffer.clear();
    inputs.clear();
    loop_bodies.clear();
    loop_values.clear();
    steps_used = 0;
}

void push_value(VmState& s, const Value& v)
{
    std::visit([&s]<class T>(const T& x) { stack_of<T>(s).push_back(x); }, v);
}

namespace {

void push_block(VmState& s, const std::vector<Node>& nodes)
{
    if (nodes.empty()) {
        return;
    }
    ExecItem item;
    item.kind = ExecItem::Kind::sequence;
    item.node = nodes.data();
    item.end = static_cast<std::int64_t>(nodes.size());
    s.exec.push_back(item);
}

} // namespace

void execute(const Program& program, std::span<const Value> inputs, const ExecutionLimits& limits,
             VmState& s)
{
    s.clear();
    s.inputs.assign(inputs.begin(), inputs.end());
    push_block(s, program.body);

    const auto& registry = InstructionRegistry::builtin();
    while (!s.exec.empty() && s.steps_used < limits.step_limit) {
        ExecItem& top = s.exec.back();
        ExecItem item;
        if (top.kind == ExecItem::Kind::sequence) {
            item.node = top.node;
            if (--top.end == 0) {
                s.exec.pop_back();
            } else {
                ++top.node;
            }
        } else {
            item = top;
            s.exec.pop_back();
        }
        ++s.steps_used;
        switch (item.kind) {
        case ExecItem::Kind::node: {
            const Node& node = *item.node;
            switch (node.kind) {
            case Node::Kind::instruction: registry.at(node.instruction).fn(s); break;
            case Node::Kind::literal: push_value(s, node.literal); break;
            case Node::Kind::block: push_block(s, node.children); break;
            }
            break;
        }
        case ExecItem::Kind::instruction: registry.at(InstructionRef{item.instruction}).fn(s); break;
        case ExecItem::Kind::range: detail::step_range(s, item); break;
        case ExecItem::Kind::times: detail::step_times(s, item); break;
        case ExecItem::Kind::iterate: detail::step_iterate(s, item); break;
        case ExecItem::Kind::sequence: break;
        }
    }
}

VmState execute(const Program& program, std::span<const Value> inputs, const ExecutionLimits& limits)
{
    VmState s;
    execute(program, inputs, limits, s);
    return s;
}

} // namespace novlex

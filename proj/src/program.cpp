#include "novlex/program.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace novlex {

Node Node::make_instruction(InstructionRef ref)
{
    Node n;
    n.kind = Kind::instruction;
    n.instruction = ref;
    return n;
}

Node Node::make_literal(Value v)
{
    Node n;
    n.kind = Kind::literal;
    n.literal = std::move(v);
    return n;
}

Node Node::make_block(std::vector<Node> children)
{
    Node n;
    n.kind = Kind::block;
    n.children = std::move(children);
    return n;
}

namespace {

std::size_t count_nodes(const std::vector<Node>& nodes)
{
    std::size_t n = nodes.size();
    for (const auto& node : nodes) {
        n += count_nodes(node.children);
    }
    return n;
}

} // namespace

std::size_t Program::size() const noexcept
{
    return count_nodes(body);
}

// ---- translation --------------------------------------------------------------

namespace {

struct OpenBlock {
    std::vector<Node>* children;
    std::vector<Node>* siblings;  // vector holding this block; further blocks go here
    std::uint32_t pending;        // blocks still to open after this one closes
};

void open_block(std::vector<OpenBlock>& open, std::vector<Node>* siblings, std::uint32_t pending)
{
    siblings->push_back(Node::make_block());
    open.push_back({&siblings->back().children, siblings, pending});
}

void close_block(std::vector<OpenBlock>& open)
{
    OpenBlock top = open.back();
    open.pop_back();
    if (top.pending > 0) {
        open_block(open, top.siblings, top.pending - 1);
    }
}

} // namespace

Program translate_genome(const Genome& genome)
{
    Program program;
    std::vector<OpenBlock> open;
    for (const Gene& gene : genome) {
        auto* target = open.empty() ? &program.body : open.back().children;
        if (gene.is_instruction()) {
            auto ref = std::get<InstructionRef>(gene.payload);
            target->push_back(Node::make_instruction(ref));
            auto opens = instruction_info(ref).opens;
            if (opens > 0) {
                open_block(open, target, opens - 1u);
            }
        } else {
            target->push_back(Node::make_literal(std::get<Value>(gene.payload)));
        }
        for (std::uint32_t c = 0; c < gene.close_count && !open.empty(); ++c) {
            close_block(open);
        }
    }
    while (!open.empty()) {
        close_block(open);
    }
    return program;
}

namespace {

void emit(const std::vector<Node>& nodes, Genome& out)
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& node = nodes[i];
        switch (node.kind) {
        case Node::Kind::block:
            throw std::invalid_argument("block is not the argument of a block-opening instruction");
        case Node::Kind::literal: out.push_back(Gene{node.literal, 0}); break;
        case Node::Kind::instruction: {
            out.push_back(Gene{node.instruction, 0});
            auto opens = instruction_info(node.instruction).opens;
            for (unsigned b = 0; b < opens; ++b) {
                if (i + 1 >= nodes.size() || nodes[i + 1].kind != Node::Kind::block) {
                    throw std::invalid_argument(instruction_info(node.instruction).name + " is missing a block");
                }
                ++i;
                emit(nodes[i].children, out);
                out.back().close_count += 1;
            }
            break;
        }
        }
    }
}

} // namespace

Genome genome_of(const Program& program)
{
    Genome out;
    emit(program.body, out);
    return out;
}

// ---- text form ------------------------------------------------------------------

namespace {

void write_nodes(const std::vector<Node>& nodes, std::string& out)
{
    out += '(';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        const Node& n = nodes[i];
        switch (n.kind) {
        case Node::Kind::instruction: out += instruction_info(n.instruction).name; break;
        case Node::Kind::literal: out += format_value(n.literal); break;
        case Node::Kind::block: write_nodes(n.children, out); break;
        }
    }
    out += ')';
}

} // namespace

std::string to_text(const Program& program)
{
    std::string out;
    write_nodes(program.body, out);
    return out;
}

std::string to_text(const Gene& gene)
{
    if (gene.is_instruction()) {
        return instruction_info(std::get<InstructionRef>(gene.payload)).name;
    }
    return format_value(std::get<Value>(gene.payload));
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Program program()
    {
        skip_space();
        expect('(');
        Program p;
        p.body = nodes_until_close();
        skip_space();
        if (pos_ != text_.size()) {
            fail("trailing text");
        }
        return p;
    }

    Gene gene(std::uint32_t close_count)
    {
        skip_space();
        Gene g;
        g.close_count = close_count;
        if (peek() == '"' || peek() == '[' || peek() == '#') {
            g.payload = literal();
        } else {
            auto tok = atom();
            if (auto v = number_or_bool(tok)) {
                g.payload = *v;
            } else {
                g.payload = instruction(tok);
            }
        }
        skip_space();
        if (pos_ != text_.size()) {
            fail("trailing text");
        }
        return g;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("program text: " + what + " at offset " + std::to_string(pos_));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    void expect(char c)
    {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::vector<Node> nodes_until_close()
    {
        std::vector<Node> nodes;
        while (true) {
            skip_space();
            char c = peek();
            if (c == '\0') {
                fail("unbalanced '('");
            }
            if (c == ')') {
                ++pos_;
                return nodes;
            }
            if (c == '(') {
                ++pos_;
                nodes.push_back(Node::make_block(nodes_until_close()));
            } else if (c == '"' || c == '[' || c == '#') {
                nodes.push_back(Node::make_literal(literal()));
            } else {
                auto tok = atom();
                if (auto v = number_or_bool(tok)) {
                    nodes.push_back(Node::make_literal(std::move(*v)));
                } else {
                    nodes.push_back(Node::make_instruction(instruction(tok)));
                }
            }
        }
    }

    std::string_view atom()
    {
        auto start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' || c == ']') {
                break;
            }
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected atom");
        }
        return text_.substr(start, pos_ - start);
    }

    InstructionRef instruction(std::string_view tok) const
    {
        if (auto ref = InstructionRegistry::builtin().find(tok)) {
            return *ref;
        }
        fail("unknown instruction '" + std::string(tok) + "'");
    }

    static std::optional<std::int64_t> parse_int(std::string_view tok)
    {
        std::int64_t x = 0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc{} || end != tok.data() + tok.size()) {
            return std::nullopt;
        }
        return x;
    }

    static std::optional<double> parse_float(std::string_view tok)
    {
        double x = 0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc{} || end != tok.data() + tok.size()) {
            return std::nullopt;
        }
        return x;
    }

    static std::optional<Value> number_or_bool(std::string_view tok)
    {
        if (tok == "true") {
            return Value{true};
        }
        if (tok == "false") {
            return Value{false};
        }
        if (auto i = parse_int(tok)) {
            return Value{*i};
        }
        if (auto f = parse_float(tok)) {
            return Value{*f};
        }
        return std::nullopt;
    }

    Value literal()
    {
        if (peek() == '"') {
            return Value{quoted()};
        }
        if (peek() == '#') {
            ++pos_;
            expect('f');
            expect('[');
            FloatVector v;
            for (auto tok : sequence()) {
                auto x = parse_float(tok);
                if (!x) {
                    fail("bad float '" + std::string(tok) + "'");
                }
                v.push_back(*x);
            }
            return Value{std::move(v)};
        }
        expect('[');
        IntVector v;
        for (auto tok : sequence()) {
            auto x = parse_int(tok);
            if (!x) {
                fail("bad integer '" + std::string(tok) + "'");
            }
            v.push_back(*x);
        }
        return Value{std::move(v)};
    }

    std::vector<std::string_view> sequence()
    {
        std::vector<std::string_view> toks;
        while (true) {
            skip_space();
            if (peek() == ']') {
                ++pos_;
                return toks;
            }
            if (peek() == '\0') {
                fail("unbalanced '['");
            }
            toks.push_back(atom());
        }
    }

    std::string quoted()
    {
        expect('"');
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) {
                fail("unterminated string");
            }
            char c = text_[pos_++];
            if (c == '"') {
                return out;
            }
            if (c == '\\') {
                if (pos_ >= text_.size()) {
                    fail("unterminated escape");
                }
                char e = text_[pos_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail("unknown escape");
                }
            } else {
                out += c;
            }
        }
    }
};

} // namespace

Program parse_program(std::string_view text)
{
    return Parser(text).program();
}

Gene parse_gene(std::string_view atom, std::uint32_t close_count)
{
    return Parser(atom).gene(close_count);
}

} // namespace novlex

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "protori/decomp.hpp"
#include "protori/findual.hpp"

namespace protori::script {

using json = nlohmann::json;

/*
 * Scripts are ordered bindings plus commands:
 *
 *   t1 = {2:3, 3:inf}
 *   a1 = aseq(pre=[12], period=[5])
 *   G  = strands [({2:inf}, [1, 0]), ({}, [1/5, 1/5])]
 *   P  = protorus G
 *   solenoid-iso a1 a1
 *   decompose G bound=8
 *
 * Bindings resolve eagerly, so the AST holds values; pretty() emits the
 * canonical literal form and parse(pretty(s)) == s.
 */

using BindingValue = std::variant<HeightSequence, ASequence, StrandGroup, ProtorusDesc>;

struct Binding {
    std::string name;
    BindingValue value;
    bool operator==(const Binding& o) const;
};

// Positional argument: a binding reference or an inline value.
struct Arg {
    std::variant<std::string, Rat, QVec> v;
    bool operator==(const Arg& o) const { return v == o.v; }
};

using OptValue = std::variant<Rat, QVec>;

struct Command {
    std::string verb;
    std::vector<Arg> args;
    std::map<std::string, OptValue> options;
    int line = 0, column = 0;

    bool operator==(const Command& o) const {
        return verb == o.verb && args == o.args && options == o.options;
    }
};

struct Script {
    std::vector<Binding> bindings;
    std::vector<Command> commands;

    bool operator==(const Script& o) const {
        return bindings == o.bindings && commands == o.commands;
    }
};

Script parse(const std::string& source);
std::string pretty(const Script& s);

struct Defaults {
    unsigned bound = 6;
    unsigned prec = 8;
    unsigned trials = 3;
    std::uint64_t seed = 0;
};

struct Verdict {
    std::string command;   // canonical echo of the command
    std::string status;    // ok | inconclusive | error
    json payload = json::object();
    json certificate;                // null unless a witness exists
    long bound_used = -1;            // -1 = not a bounded search
    std::string error_code, error_message;
    int error_line = 0, error_column = 0;

    json to_json() const;
};

// Execute commands in order; library errors become error verdicts.
std::vector<Verdict> run(const Script& s, const Defaults& defaults = {});

// Exit status: 0 all ok, 3 any error, 4 any inconclusive without error.
int exit_code(const std::vector<Verdict>& verdicts);

std::string render_json(const std::vector<Verdict>& verdicts);
std::string render_text(const std::vector<Verdict>& verdicts);

// Verdicts for a findual sequence file: group/hom bindings plus `seq f g`
// checks, each dualized and double-dualized.
std::vector<Verdict> run_findual_file(const std::string& content);

// JSON encodings shared with the CLI.
json type_to_json(const TypeClass& t);
json rat_to_json(const Rat& q);

} // namespace protori::script

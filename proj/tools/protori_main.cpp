#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "protori/script.hpp"

namespace {

using protori::script::Defaults;
using protori::script::Verdict;

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw protori::Error(protori::errc::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int emit(const std::vector<Verdict>& verdicts, const std::string& format) {
    if (format == "text") std::cout << protori::script::render_text(verdicts);
    else std::cout << protori::script::render_json(verdicts);
    return protori::script::exit_code(verdicts);
}

int run_source(const std::string& source, const Defaults& defaults, const std::string& format) {
    try {
        protori::script::Script s = protori::script::parse(source);
        return emit(protori::script::run(s, defaults), format);
    } catch (const protori::Error& e) {
        Verdict v;
        v.command = "parse";
        v.status = "error";
        v.error_code = protori::errc_name(e.code());
        v.error_message = e.what();
        v.error_line = e.line();
        v.error_column = e.column();
        emit({v}, format);
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"protori: solenoids and finite-dimensional protori through their discrete duals"};
    app.require_subcommand(1);

    std::string format = "json";
    Defaults defaults;
    unsigned long seed = 0;
    app.add_option("--format", format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--bound", defaults.bound, "search bound for bounded searches (default 6)");
    app.add_option("--prec", defaults.prec, "digit precision for adic values (default 8)");
    app.add_option("--trials", defaults.trials, "permuted runs for check-uniqueness (default 3)");
    app.add_option("--seed", seed, "seed for permuted runs (default 0)");

    // run <script>
    std::string script_path;
    CLI::App* cmd_run = app.add_subcommand("run", "execute a script (file or stdin)");
    cmd_run->add_option("file", script_path, "script path, or - for stdin");

    // solenoid type|iso|canonical
    CLI::App* cmd_sol = app.add_subcommand("solenoid", "solenoid classification");
    cmd_sol->require_subcommand(1);
    std::string sol_a, sol_b, sol_heights;
    CLI::App* sol_type = cmd_sol->add_subcommand("type", "type of the solenoid of an a-sequence");
    sol_type->add_option("--aseq", sol_a, "a-sequence literal")->required();
    CLI::App* sol_iso = cmd_sol->add_subcommand("iso", "topological isomorphism of two solenoids");
    sol_iso->add_option("--a", sol_a, "first a-sequence literal")->required();
    sol_iso->add_option("--b", sol_b, "second a-sequence literal")->required();
    CLI::App* sol_canon = cmd_sol->add_subcommand("canonical", "canonical a-sequence of heights");
    sol_canon->add_option("--heights", sol_heights, "height sequence literal")->required();

    // adic add|neg|from-int
    CLI::App* cmd_adic = app.add_subcommand("adic", "truncated mixed-radix arithmetic");
    cmd_adic->require_subcommand(1);
    std::string adic_aseq, adic_x, adic_y, adic_z;
    CLI::App* adic_add_c = cmd_adic->add_subcommand("add", "digitwise sum");
    adic_add_c->add_option("--aseq", adic_aseq, "a-sequence literal")->required();
    adic_add_c->add_option("--x", adic_x, "digits [d0,d1,...]")->required();
    adic_add_c->add_option("--y", adic_y, "digits [d0,d1,...]")->required();
    CLI::App* adic_neg_c = cmd_adic->add_subcommand("neg", "group inverse");
    adic_neg_c->add_option("--aseq", adic_aseq, "a-sequence literal")->required();
    adic_neg_c->add_option("--x", adic_x, "digits [d0,d1,...]")->required();
    CLI::App* adic_int_c = cmd_adic->add_subcommand("from-int", "mixed-radix digits of an integer");
    adic_int_c->add_option("--aseq", adic_aseq, "a-sequence literal")->required();
    adic_int_c->add_option("--z", adic_z, "integer")->required();

    // pair
    std::string pair_aseq, pair_q, pair_x, pair_r;
    CLI::App* cmd_pair = app.add_subcommand("pair", "character pairing A_a x Sigma_a -> T");
    cmd_pair->add_option("--aseq", pair_aseq, "a-sequence literal")->required();
    cmd_pair->add_option("--q", pair_q, "dual element m/n")->required();
    cmd_pair->add_option("--x", pair_x, "adic digits [d0,d1,...]")->required();
    cmd_pair->add_option("--r", pair_r, "real coordinate a/b")->required();

    // findual check
    std::string findual_path;
    CLI::App* cmd_findual = app.add_subcommand("findual", "finite abelian duality checks");
    CLI::App* findual_check = cmd_findual->add_subcommand("check", "verify sequences from a file");
    findual_check->add_option("--seq", findual_path, "sequence description file")->required();
    cmd_findual->require_subcommand(1);

    // group verbs
    std::string grp, grp2, vec;
    unsigned long opt_bound = 0, opt_trials = 0;
    bool bound_set = false, trials_set = false;
    auto add_group_cmd = [&](const char* name, const char* help, bool with_vec, bool with_second,
                             bool with_bound, bool with_trials) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option("--group", grp, "group literal (strands [...])")->required();
        if (with_vec) c->add_option("--x", vec, "vector [a/b, ...]")->required();
        if (with_second) c->add_option("--group2", grp2, "second group literal")->required();
        if (with_bound)
            c->add_option("--bound", opt_bound, "search bound")->each([&](const std::string&) {
                bound_set = true;
            });
        if (with_trials)
            c->add_option("--trials", opt_trials, "permuted runs")->each([&](const std::string&) {
                trials_set = true;
            });
        return c;
    };
    CLI::App* cmd_member = add_group_cmd("member", "membership in a strand group", true, false, false, false);
    CLI::App* cmd_decomp = add_group_cmd("decompose", "main decomposition (torus types x clipped rest)",
                                         false, false, true, false);
    CLI::App* cmd_clipped = add_group_cmd("clipped", "bounded search for a rank-1 summand",
                                          false, false, true, false);
    CLI::App* cmd_neariso = add_group_cmd("neariso", "near-isomorphism search", false, true, true, false);
    CLI::App* cmd_dual = add_group_cmd("dual", "protorus dual descriptor", false, false, false, false);
    CLI::App* cmd_dim = add_group_cmd("dim", "rank / protorus dimension", false, false, false, false);
    CLI::App* cmd_uniq = add_group_cmd("check-uniqueness", "decomposition invariance under permutations",
                                       false, false, true, true);

    CLI11_PARSE(app, argc, argv);
    defaults.seed = seed;

    try {
        if (*cmd_run) return run_source(slurp(script_path), defaults, format);
        if (*cmd_findual) {
            return emit(protori::script::run_findual_file(slurp(findual_path)), format);
        }

        std::ostringstream src;
        if (*cmd_sol) {
            if (*sol_type) {
                src << "a = " << sol_a << "\nsolenoid-type a\n";
            } else if (*sol_iso) {
                src << "a = " << sol_a << "\nb = " << sol_b << "\nsolenoid-iso a b\n";
            } else {
                src << "h = " << sol_heights << "\nsolenoid-canonical h\n";
            }
        } else if (*cmd_adic) {
            src << "a = " << adic_aseq << "\n";
            if (*adic_add_c) src << "adic-add a " << adic_x << " " << adic_y << "\n";
            else if (*adic_neg_c) src << "adic-neg a " << adic_x << "\n";
            else src << "adic-from-int a " << adic_z << " prec=" << defaults.prec << "\n";
        } else if (*cmd_pair) {
            src << "a = " << pair_aseq << "\n"
                << "pair a q=" << pair_q << " x=" << pair_x << " r=" << pair_r << "\n";
        } else {
            src << "G = " << grp << "\n";
            if (*cmd_neariso) src << "H = " << grp2 << "\n";
            std::string bound_opt = bound_set ? " bound=" + std::to_string(opt_bound) : "";
            if (*cmd_member) src << "member G " << vec << "\n";
            else if (*cmd_decomp) src << "decompose G" << bound_opt << "\n";
            else if (*cmd_clipped) src << "clipped G" << bound_opt << "\n";
            else if (*cmd_neariso) src << "neariso G H" << bound_opt << "\n";
            else if (*cmd_dual) src << "dual G\n";
            else if (*cmd_dim) src << "dim G\n";
            else if (*cmd_uniq)
                src << "check-uniqueness G" << bound_opt
                    << (trials_set ? " trials=" + std::to_string(opt_trials) : "")
                    << " seed=" << seed << "\n";
        }
        return run_source(src.str(), defaults, format);
    } catch (const protori::Error& e) {
        Verdict v;
        v.command = "cli";
        v.status = "error";
        v.error_code = protori::errc_name(e.code());
        v.error_message = e.what();
        emit({v}, format);
        return 3;
    }
}

#include "protori/script.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace protori::script {

bool Binding::operator==(const Binding& o) const {
    return name == o.name && value == o.value;
}

// ---------------------------------------------------------------- lexer --

namespace {

enum class Tok { ident, number, punct, newline, end };

struct Token {
    Tok kind;
    std::string text;   // ident text, number digits (with sign), or punct char
    int line, col;
};

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;
    int depth = 0;   // () [] {} nesting; newlines inside groups are spacing

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(errc::parse_error, msg, line, col);
    }

    char peek() const { return pos < src.size() ? src[pos] : '\0'; }
    char get() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    std::vector<Token> lex() {
        std::vector<Token> out;
        bool line_has_tokens = false;
        while (pos < src.size()) {
            char c = peek();
            if (c == '#') {
                while (pos < src.size() && peek() != '\n') get();
                continue;
            }
            if (c == '\n') {
                int l = line, co = col;
                get();
                if (depth == 0 && line_has_tokens) {
                    out.push_back({Tok::newline, "", l, co});
                    line_has_tokens = false;
                }
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                get();
                continue;
            }
            int l = line, co = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string t;
                while (pos < src.size()) {
                    char d = peek();
                    if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                        t += get();
                    } else if (d == '-' && pos + 1 < src.size() &&
                               std::isalpha(static_cast<unsigned char>(src[pos + 1]))) {
                        t += get();   // hyphenated verbs
                    } else {
                        break;
                    }
                }
                out.push_back({Tok::ident, t, l, co});
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos + 1 < src.size() &&
                        std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
                std::string t;
                t += get();
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) t += get();
                out.push_back({Tok::number, t, l, co});
            } else if (std::string("{}[](),:|=/").find(c) != std::string::npos) {
                if (c == '(' || c == '[' || c == '{') ++depth;
                if (c == ')' || c == ']' || c == '}') --depth;
                get();
                out.push_back({Tok::punct, std::string(1, c), l, co});
            } else {
                fail(std::string("unexpected character '") + c + "'");
            }
            line_has_tokens = true;
        }
        if (line_has_tokens) out.push_back({Tok::newline, "", line, col});
        out.push_back({Tok::end, "", line, col});
        return out;
    }
};

const std::set<std::string> kVerbs = {
    "type",          "solenoid-type", "solenoid-iso",   "solenoid-canonical",
    "adic-add",      "adic-neg",      "adic-from-int",  "pair",
    "member",        "decompose",     "clipped",        "neariso",
    "dual",          "dim",           "check-uniqueness",
};

// --------------------------------------------------------------- parser --

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;
    std::map<std::string, BindingValue> env;

    const Token& cur() const { return toks[pos]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(errc::parse_error, msg, cur().line, cur().col);
    }
    [[noreturn]] void sem_fail(const std::string& msg, const Token& at) const {
        throw Error(errc::semantic_error, msg, at.line, at.col);
    }

    bool at_punct(char c) const { return cur().kind == Tok::punct && cur().text[0] == c; }
    bool at_ident(const char* s) const { return cur().kind == Tok::ident && cur().text == s; }

    Token expect_punct(char c) {
        if (!at_punct(c)) fail(std::string("expected '") + c + "'");
        return toks[pos++];
    }
    Token expect_ident() {
        if (cur().kind != Tok::ident) fail("expected an identifier");
        return toks[pos++];
    }

    Int parse_int() {
        if (cur().kind != Tok::number) fail("expected an integer");
        return Int(toks[pos++].text, 10);
    }

    Rat parse_rat() {
        Int num = parse_int();
        if (at_punct('/')) {
            ++pos;
            Int den = parse_int();
            if (den == 0) fail("zero denominator");
            return Rat(num, den);
        }
        return Rat(num);
    }

    ExtNat parse_extnat() {
        if (at_ident("inf")) {
            ++pos;
            return ExtNat::inf();
        }
        if (cur().kind != Tok::number) fail("expected a natural number or 'inf'");
        Token t = toks[pos++];
        if (t.text[0] == '-') sem_fail("heights are nonnegative", t);
        Int n(t.text, 10);
        if (!n.fits_ulong_p()) sem_fail("height out of range", t);
        return ExtNat(n.get_ui());
    }

    // {2:3, 5:inf | default 0}
    HeightSequence parse_heightseq() {
        Token open = expect_punct('{');
        std::map<Int, ExtNat> exc;
        ExtNat def(0);
        bool first = true;
        while (!at_punct('}') && !at_punct('|')) {
            if (!first) expect_punct(',');
            first = false;
            Token pt = cur();
            Int p = parse_int();
            expect_punct(':');
            ExtNat h = parse_extnat();
            if (!is_prime(p)) sem_fail("key " + p.get_str() + " is not prime", pt);
            if (exc.count(p)) sem_fail("duplicate key " + p.get_str(), pt);
            exc.emplace(p, h);
        }
        if (at_punct('|')) {
            ++pos;
            if (!at_ident("default")) fail("expected 'default'");
            ++pos;
            def = parse_extnat();
        }
        expect_punct('}');
        return HeightSequence(def, std::move(exc));
    }

    std::vector<Int> parse_int_list() {
        expect_punct('[');
        std::vector<Int> out;
        bool first = true;
        while (!at_punct(']')) {
            if (!first) expect_punct(',');
            first = false;
            out.push_back(parse_int());
        }
        ++pos;
        return out;
    }

    QVec parse_vector() {
        expect_punct('[');
        QVec out;
        bool first = true;
        while (!at_punct(']')) {
            if (!first) expect_punct(',');
            first = false;
            out.push_back(parse_rat());
        }
        ++pos;
        return out;
    }

    HeightSequence heights_operand() {
        if (at_punct('{')) return parse_heightseq();
        Token t = expect_ident();
        auto it = env.find(t.text);
        if (it == env.end()) sem_fail("unknown name '" + t.text + "'", t);
        if (auto* h = std::get_if<HeightSequence>(&it->second)) return *h;
        sem_fail("'" + t.text + "' is not a height sequence", t);
    }

    ASequence parse_aseq() {
        Token kw = expect_ident();   // 'aseq'
        expect_punct('(');
        ASequence result = ASequence::explicit_seq({}, {2});
        if (at_ident("canonical")) {
            ++pos;
            HeightSequence h = heights_operand();
            try {
                result = ASequence::canonical(h);
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), kw.line, kw.col);
            }
        } else if (at_ident("pre")) {
            ++pos;
            expect_punct('=');
            Token at = cur();
            std::vector<Int> pre = parse_int_list();
            if (at_punct(',')) ++pos;
            if (!at_ident("period")) fail("expected 'period'");
            ++pos;
            expect_punct('=');
            std::vector<Int> period = parse_int_list();
            try {
                result = ASequence::explicit_seq(std::move(pre), std::move(period));
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), at.line, at.col);
            }
        } else {
            fail("expected 'pre=' or 'canonical'");
        }
        expect_punct(')');
        return result;
    }

    StrandGroup parse_group() {
        Token kw = expect_ident();   // 'strands'
        expect_punct('[');
        std::vector<Strand> strands;
        bool first = true;
        std::size_t dim = 0;
        while (!at_punct(']')) {
            if (!first) expect_punct(',');
            first = false;
            Token at = cur();
            expect_punct('(');
            HeightSequence h = heights_operand();
            expect_punct(',');
            QVec w = parse_vector();
            expect_punct(')');
            if (strands.empty()) {
                dim = w.size();
            } else if (w.size() != dim) {
                sem_fail("strand vectors have mismatched dimensions", at);
            }
            strands.push_back({std::move(h), std::move(w)});
        }
        ++pos;
        try {
            return StrandGroup(dim, std::move(strands));
        } catch (const Error& e) {
            throw Error(e.code(), e.what(), kw.line, kw.col);
        }
    }

    BindingValue parse_expr() {
        if (at_punct('{')) return parse_heightseq();
        if (at_ident("aseq")) return parse_aseq();
        if (at_ident("strands")) return parse_group();
        if (at_ident("protorus")) {
            ++pos;
            if (at_ident("strands")) return ProtorusDesc{parse_group()};
            Token t = expect_ident();
            auto it = env.find(t.text);
            if (it == env.end()) sem_fail("unknown name '" + t.text + "'", t);
            if (auto* g = std::get_if<StrandGroup>(&it->second)) return ProtorusDesc{*g};
            sem_fail("'" + t.text + "' is not a group", t);
        }
        fail("expected a height sequence, aseq(...), strands [...], or protorus");
    }

    Command parse_command() {
        Token vt = expect_ident();
        Command c;
        c.verb = vt.text;
        c.line = vt.line;
        c.column = vt.col;
        if (!kVerbs.count(c.verb)) sem_fail("unknown command '" + c.verb + "'", vt);
        while (cur().kind != Tok::newline && cur().kind != Tok::end) {
            if (cur().kind == Tok::ident) {
                Token name = toks[pos++];
                if (at_punct('=')) {
                    ++pos;
                    OptValue v = at_punct('[') ? OptValue(parse_vector()) : OptValue(parse_rat());
                    if (c.options.count(name.text)) sem_fail("duplicate option '" + name.text + "'", name);
                    c.options.emplace(name.text, std::move(v));
                } else {
                    if (!env.count(name.text)) sem_fail("unknown name '" + name.text + "'", name);
                    c.args.push_back(Arg{name.text});
                }
            } else if (at_punct('[')) {
                c.args.push_back(Arg{parse_vector()});
            } else if (cur().kind == Tok::number) {
                c.args.push_back(Arg{parse_rat()});
            } else {
                fail("unexpected token in command arguments");
            }
        }
        return c;
    }

    Script parse_script() {
        Script s;
        while (cur().kind != Tok::end) {
            if (cur().kind == Tok::newline) {
                ++pos;
                continue;
            }
            if (cur().kind == Tok::ident && pos + 1 < toks.size() &&
                toks[pos + 1].kind == Tok::punct && toks[pos + 1].text == "=") {
                Token name = toks[pos];
                if (kVerbs.count(name.text)) sem_fail("'" + name.text + "' is a command name", name);
                if (env.count(name.text)) sem_fail("duplicate binding '" + name.text + "'", name);
                pos += 2;
                BindingValue v = parse_expr();
                env.emplace(name.text, v);
                s.bindings.push_back(Binding{name.text, std::move(v)});
            } else {
                s.commands.push_back(parse_command());
            }
            if (cur().kind == Tok::newline) ++pos;
            else if (cur().kind != Tok::end) fail("expected end of statement");
        }
        return s;
    }
};

std::string vec_str(const QVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + "]";
}

} // namespace

Script parse(const std::string& source) {
    Lexer lx(source);
    Parser p{lx.lex()};
    return p.parse_script();
}

std::string pretty(const Script& s) {
    std::string out;
    for (const Binding& b : s.bindings) {
        out += b.name + " = ";
        if (auto* h = std::get_if<HeightSequence>(&b.value)) out += h->str();
        else if (auto* a = std::get_if<ASequence>(&b.value)) out += a->str();
        else if (auto* g = std::get_if<StrandGroup>(&b.value)) out += g->str();
        else if (auto* p = std::get_if<ProtorusDesc>(&b.value)) out += "protorus " + p->dual.str();
        out += "\n";
    }
    for (const Command& c : s.commands) {
        out += c.verb;
        for (const Arg& a : c.args) {
            out += " ";
            if (auto* n = std::get_if<std::string>(&a.v)) out += *n;
            else if (auto* q = std::get_if<Rat>(&a.v)) out += q->str();
            else out += vec_str(std::get<QVec>(a.v));
        }
        for (const auto& [k, v] : c.options) {
            out += " " + k + "=";
            if (auto* q = std::get_if<Rat>(&v)) out += q->str();
            else out += vec_str(std::get<QVec>(v));
        }
        out += "\n";
    }
    return out;
}

// --------------------------------------------------------------- engine --

json rat_to_json(const Rat& q) { return q.str(); }

json type_to_json(const TypeClass& t) {
    json flips = json::array();
    for (const Int& p : t.flips()) flips.push_back(p.get_str());
    return json{{"default", t.default_value().str()}, {"flips", flips}};
}

namespace {

json vec_to_json(const QVec& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(x.str());
    return a;
}

json mat_to_json(const QMat& m) {
    json a = json::array();
    for (const QVec& row : m) a.push_back(vec_to_json(row));
    return a;
}

json ints_to_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(x.get_str());
    return a;
}

json types_to_json(std::vector<TypeClass> ts) {
    std::sort(ts.begin(), ts.end());
    json a = json::array();
    for (const TypeClass& t : ts) a.push_back(type_to_json(t));
    return a;
}

json idempotent_to_json(const Idempotent& e) {
    return json{{"v", ints_to_json(e.v)}, {"f", vec_to_json(e.f)}};
}

struct Engine {
    std::map<std::string, BindingValue> env;
    Defaults defaults;

    const BindingValue& lookup(const Arg& a, const Command& c) const {
        auto* n = std::get_if<std::string>(&a.v);
        if (!n)
            throw Error(errc::semantic_error, "expected a name argument", c.line, c.column);
        auto it = env.find(*n);
        if (it == env.end())
            throw Error(errc::semantic_error, "unknown name '" + *n + "'", c.line, c.column);
        return it->second;
    }

    const Arg& arg(const Command& c, std::size_t i) const {
        if (i >= c.args.size())
            throw Error(errc::semantic_error,
                        c.verb + " needs at least " + std::to_string(i + 1) + " argument(s)",
                        c.line, c.column);
        return c.args[i];
    }

    template <typename T>
    const T& named(const Command& c, std::size_t i, const char* what) const {
        const BindingValue& v = lookup(arg(c, i), c);
        if (auto* t = std::get_if<T>(&v)) return *t;
        throw Error(errc::semantic_error,
                    "argument " + std::to_string(i + 1) + " of " + c.verb + " must be " + what,
                    c.line, c.column);
    }

    QVec vector_arg(const Command& c, std::size_t i) const {
        const Arg& a = arg(c, i);
        if (auto* v = std::get_if<QVec>(&a.v)) return *v;
        throw Error(errc::semantic_error, "expected a vector literal", c.line, c.column);
    }

    unsigned uint_opt(const Command& c, const char* key, unsigned dflt) const {
        auto it = c.options.find(key);
        if (it == c.options.end()) return dflt;
        auto* q = std::get_if<Rat>(&it->second);
        if (!q || !q->is_integer() || q->sign() < 0)
            throw Error(errc::semantic_error, std::string("option ") + key + " must be a natural number",
                        c.line, c.column);
        return static_cast<unsigned>(q->num().get_ui());
    }

    Rat rat_opt(const Command& c, const char* key) const {
        auto it = c.options.find(key);
        if (it == c.options.end())
            throw Error(errc::semantic_error, c.verb + " requires option " + key, c.line, c.column);
        auto* q = std::get_if<Rat>(&it->second);
        if (!q) throw Error(errc::semantic_error, std::string("option ") + key + " must be a rational",
                            c.line, c.column);
        return *q;
    }

    QVec vec_opt(const Command& c, const char* key) const {
        auto it = c.options.find(key);
        if (it == c.options.end())
            throw Error(errc::semantic_error, c.verb + " requires option " + key, c.line, c.column);
        auto* v = std::get_if<QVec>(&it->second);
        if (!v) throw Error(errc::semantic_error, std::string("option ") + key + " must be a vector",
                            c.line, c.column);
        return *v;
    }

    AdicInt make_adic(const ASequence& a, const QVec& digits, const Command& c) const {
        if (digits.empty())
            throw Error(errc::semantic_error, "digit list must be nonempty", c.line, c.column);
        AdicInt x{a, {}};
        for (std::size_t k = 0; k < digits.size(); ++k) {
            if (!digits[k].is_integer() || digits[k].sign() < 0 || digits[k].num() >= a.term(k))
                throw Error(errc::semantic_error,
                            "digit " + digits[k].str() + " out of range for a_" + std::to_string(k),
                            c.line, c.column);
            x.digits.push_back(digits[k].num());
        }
        return x;
    }

    Verdict exec(const Command& c) {
        Verdict v;
        Script echo;
        echo.commands.push_back(c);
        v.command = pretty(echo);
        if (!v.command.empty() && v.command.back() == '\n') v.command.pop_back();
        v.status = "ok";

        if (c.verb == "type") {
            TypeClass t = canonical_type(named<HeightSequence>(c, 0, "a height sequence"));
            v.payload = json{{"type", type_to_json(t)}};
        } else if (c.verb == "solenoid-type") {
            SolenoidDesc d = solenoid_of(named<ASequence>(c, 0, "an a-sequence"));
            v.payload = json{{"torus", d.torus}, {"type", type_to_json(d.type)}};
        } else if (c.verb == "solenoid-iso") {
            SolenoidDesc d1 = solenoid_of(named<ASequence>(c, 0, "an a-sequence"));
            SolenoidDesc d2 = solenoid_of(named<ASequence>(c, 1, "an a-sequence"));
            v.payload = json{{"iso", solenoid_iso(d1, d2)}};
        } else if (c.verb == "solenoid-canonical") {
            AseqOrTorus r = canonical_aseq(named<HeightSequence>(c, 0, "a height sequence"));
            if (std::holds_alternative<TorusMarker>(r)) {
                v.payload = json{{"torus", true}};
            } else {
                const ASequence& a = std::get<ASequence>(r);
                json terms = json::array();
                for (std::size_t k = 0; k < 8; ++k) terms.push_back(a.term(k).get_str());
                v.payload = json{{"torus", false}, {"aseq", a.str()}, {"terms", terms}};
            }
        } else if (c.verb == "adic-from-int") {
            const ASequence& a = named<ASequence>(c, 0, "an a-sequence");
            Rat z = std::get<Rat>(arg(c, 1).v);
            if (!z.is_integer())
                throw Error(errc::semantic_error, "adic-from-int needs an integer", c.line, c.column);
            AdicInt x = adic_from_int(a, z.num(), uint_opt(c, "prec", defaults.prec));
            v.payload = json{{"digits", ints_to_json(x.digits)}};
        } else if (c.verb == "adic-add") {
            const ASequence& a = named<ASequence>(c, 0, "an a-sequence");
            AdicInt x = make_adic(a, vector_arg(c, 1), c);
            AdicInt y = make_adic(a, vector_arg(c, 2), c);
            v.payload = json{{"digits", ints_to_json(adic_add(x, y).digits)}};
        } else if (c.verb == "adic-neg") {
            const ASequence& a = named<ASequence>(c, 0, "an a-sequence");
            AdicInt x = make_adic(a, vector_arg(c, 1), c);
            v.payload = json{{"digits", ints_to_json(adic_neg(x).digits)}};
        } else if (c.verb == "pair") {
            const ASequence& a = named<ASequence>(c, 0, "an a-sequence");
            AdicInt x = make_adic(a, vec_opt(c, "x"), c);
            SolenoidPoint p = point_canonicalize(x, rat_opt(c, "r"));
            AngleQ angle = pairing(rat_opt(c, "q"), p);
            v.payload = json{{"angle", angle.str()}};
        } else if (c.verb == "member") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            v.payload = json{{"member", member(g, vector_arg(c, 1))}};
        } else if (c.verb == "decompose") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            Decomposition d = main_decompose(g, uint_opt(c, "bound", defaults.bound));
            v.payload = json{{"torus_types", types_to_json(d.torus_types)},
                             {"remainder_rank", d.remainder.rank()},
                             {"remainder", d.remainder.str()},
                             {"complete", d.complete}};
            json certs = json::array();
            for (const Idempotent& e : d.certificates) certs.push_back(idempotent_to_json(e));
            if (!certs.empty()) v.certificate = certs;
            v.bound_used = d.bound_used;
            if (!d.rank0_reached()) v.status = "inconclusive";
        } else if (c.verb == "clipped") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            unsigned bound = uint_opt(c, "bound", defaults.bound);
            auto e = find_rank1_idempotent(g, bound);
            v.bound_used = bound;
            if (e) {
                v.payload = json{{"clipped", false}};
                v.certificate = idempotent_to_json(*e);
            } else {
                v.payload = json{{"clipped", "no rank-1 summand found at this bound"}};
                v.status = "inconclusive";
            }
        } else if (c.verb == "neariso") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            const StrandGroup& h = named<StrandGroup>(c, 1, "a group");
            NearIsoResult r = near_iso(g, h, uint_opt(c, "bound", defaults.bound));
            json mult = json::array();
            for (const Int& n : r.multipliers) mult.push_back(n.get_str());
            v.payload = json{{"verdict", verdict_name(r.verdict)}, {"multipliers", mult}};
            if (!r.obstruction.empty()) v.payload["obstruction"] = r.obstruction;
            if (!r.witnesses.empty()) {
                json w = json::array();
                for (const NearIsoWitness& wit : r.witnesses)
                    w.push_back(json{{"forward", mat_to_json(wit.forward)},
                                     {"backward", mat_to_json(wit.backward)},
                                     {"multiplier", wit.multiplier.get_str()}});
                v.certificate = w;
            }
            v.bound_used = r.bound_used;
            if (r.verdict == protori::Verdict::inconclusive) v.status = "inconclusive";
        } else if (c.verb == "dual") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            v.payload = json{{"dimension", g.rank()}};
        } else if (c.verb == "dim") {
            const BindingValue& b = lookup(arg(c, 0), c);
            std::size_t d;
            if (auto* g = std::get_if<StrandGroup>(&b)) d = g->rank();
            else if (auto* p = std::get_if<ProtorusDesc>(&b)) d = protorus_dim(*p);
            else
                throw Error(errc::semantic_error, "dim needs a group or protorus", c.line, c.column);
            v.payload = json{{"dim", d}};
        } else if (c.verb == "check-uniqueness") {
            const StrandGroup& g = named<StrandGroup>(c, 0, "a group");
            unsigned bound = uint_opt(c, "bound", defaults.bound);
            unsigned trials = uint_opt(c, "trials", defaults.trials);
            std::uint64_t seed = uint_opt(c, "seed", static_cast<unsigned>(defaults.seed));
            UniquenessReport rep = uniqueness_check(g, trials, bound, seed);
            json tr = json::array();
            for (const auto& t : rep.trials)
                tr.push_back(json{{"torus_types", types_to_json(t.torus_types)},
                                  {"remainder_rank", t.remainder.rank()}});
            json pairs = json::array();
            for (const auto& pc : rep.pair_checks) {
                json mult = json::array();
                for (const Int& n : pc.multipliers) mult.push_back(n.get_str());
                pairs.push_back(json{{"i", pc.i},
                                     {"j", pc.j},
                                     {"verdict", verdict_name(pc.verdict)},
                                     {"multipliers", mult}});
            }
            v.payload = json{{"trials", tr},
                             {"pairwise", pairs},
                             {"torus_multisets_equal", rep.torus_multisets_equal},
                             {"remainders_compatible", rep.remainders_compatible}};
            v.bound_used = bound;
            if (!(rep.torus_multisets_equal && rep.remainders_compatible)) v.status = "inconclusive";
        } else {
            throw Error(errc::semantic_error, "unknown command '" + c.verb + "'", c.line, c.column);
        }
        return v;
    }
};

} // namespace

json Verdict::to_json() const {
    json j{{"command", command}, {"status", status}, {"payload", payload}};
    if (!certificate.is_null()) j["certificate"] = certificate;
    if (bound_used >= 0) j["bound_used"] = bound_used;
    if (status == "error") {
        json e{{"code", error_code}, {"message", error_message}};
        if (error_line > 0) {
            e["line"] = error_line;
            e["column"] = error_column;
        }
        j["error"] = e;
    }
    return j;
}

std::vector<Verdict> run(const Script& s, const Defaults& defaults) {
    Engine eng;
    eng.defaults = defaults;
    for (const Binding& b : s.bindings) eng.env.emplace(b.name, b.value);
    std::vector<Verdict> out;
    for (const Command& c : s.commands) {
        try {
            out.push_back(eng.exec(c));
        } catch (const Error& e) {
            Verdict v;
            Script echo;
            echo.commands.push_back(c);
            v.command = pretty(echo);
            if (!v.command.empty() && v.command.back() == '\n') v.command.pop_back();
            v.status = "error";
            v.error_code = errc_name(e.code());
            v.error_message = e.what();
            v.error_line = e.line();
            v.error_column = e.column();
            out.push_back(std::move(v));
        } catch (const std::exception& e) {
            Verdict v;
            v.command = c.verb;
            v.status = "error";
            v.error_code = errc_name(errc::internal);
            v.error_message = e.what();
            out.push_back(std::move(v));
        }
    }
    return out;
}

int exit_code(const std::vector<Verdict>& verdicts) {
    bool any_error = false, any_inconclusive = false;
    for (const Verdict& v : verdicts) {
        if (v.status == "error") any_error = true;
        if (v.status == "inconclusive") any_inconclusive = true;
    }
    if (any_error) return 3;
    if (any_inconclusive) return 4;
    return 0;
}

std::string render_json(const std::vector<Verdict>& verdicts) {
    json arr = json::array();
    for (const Verdict& v : verdicts) arr.push_back(v.to_json());
    return arr.dump(2) + "\n";
}

std::string render_text(const std::vector<Verdict>& verdicts) {
    std::string out;
    for (const Verdict& v : verdicts) {
        out += "[" + v.status + "] " + v.command + ": ";
        if (v.status == "error") out += v.error_code + " - " + v.error_message;
        else out += v.payload.dump();
        if (v.bound_used >= 0) out += " (bound " + std::to_string(v.bound_used) + ")";
        out += "\n";
    }
    return out;
}

// ------------------------------------------------- findual check format --

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

} // namespace

std::vector<Verdict> run_findual_file(const std::string& content) {
    std::vector<Verdict> out;
    std::map<std::string, FinAb> groups;
    std::map<std::string, FinHom> homs;
    std::istringstream in(content);
    std::string raw;
    int lineno = 0;

    auto error_verdict = [&](const std::string& cmd, const Error& e) {
        Verdict v;
        v.command = cmd;
        v.status = "error";
        v.error_code = errc_name(e.code());
        v.error_message = e.what();
        v.error_line = e.line() ? e.line() : lineno;
        out.push_back(std::move(v));
    };

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        // strip the punctuation so the line splits into plain words
        std::string plain;
        for (char ch : line) {
            if (ch == '=' || ch == ':' || ch == ',') plain += ' ';
            else plain += ch;
        }
        std::vector<std::string> words = split_ws(plain);
        if (words.empty()) continue;
        try {
            if (words[0] == "group") {
                // group A = [d1, d2, ...]
                if (words.size() < 2) throw Error(errc::parse_error, "group needs a name", lineno, 1);
                std::vector<Int> ds;
                for (std::size_t i = 2; i < words.size(); ++i) {
                    std::string w = words[i];
                    std::string digits;
                    for (char ch : w)
                        if (ch != '[' && ch != ']') digits += ch;
                    if (!digits.empty()) ds.push_back(Int(digits, 10));
                }
                groups.emplace(words[1], FinAb(ds));
            } else if (words[0] == "hom") {
                // hom f : A -> B = [[...],[...]]
                if (words.size() < 5 || words[3] != "->")
                    throw Error(errc::parse_error, "hom syntax: hom f : A -> B = [[...]]", lineno, 1);
                auto src = groups.find(words[2]);
                auto tgt = groups.find(words[4]);
                if (src == groups.end() || tgt == groups.end())
                    throw Error(errc::semantic_error, "unknown group in hom declaration", lineno, 1);
                // matrix text: everything after the target name
                std::string mat;
                for (std::size_t i = 5; i < words.size(); ++i) mat += words[i] + " ";
                std::vector<std::vector<Int>> rows;
                std::vector<Int> row;
                std::string tok;
                int depth = 0;
                auto flushtok = [&]() {
                    if (!tok.empty()) {
                        row.push_back(Int(tok, 10));
                        tok.clear();
                    }
                };
                for (char ch : mat) {
                    if (ch == '[') {
                        ++depth;
                    } else if (ch == ']') {
                        flushtok();
                        if (depth == 2) {
                            rows.push_back(row);
                            row.clear();
                        }
                        --depth;
                    } else if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
                        tok += ch;
                    } else {
                        flushtok();
                    }
                }
                homs.emplace(words[1], FinHom(src->second, tgt->second, rows));
            } else if (words[0] == "seq") {
                if (words.size() != 3)
                    throw Error(errc::parse_error, "seq syntax: seq f g", lineno, 1);
                auto fi = homs.find(words[1]);
                auto gi = homs.find(words[2]);
                if (fi == homs.end() || gi == homs.end())
                    throw Error(errc::semantic_error, "unknown hom in seq", lineno, 1);
                const FinHom& f = fi->second;
                const FinHom& g = gi->second;
                Verdict v;
                v.command = "seq " + words[1] + " " + words[2];
                bool inj = is_injective(f);
                bool surj = is_surjective(g);
                bool mid = is_exact(f, g);
                FinHom gd = dual_hom(g);
                FinHom fd = dual_hom(f);
                bool dual_exact = is_short_exact(gd, fd);
                bool dd = (dual_hom(fd) == f) && (dual_hom(gd) == g);
                v.status = "ok";
                v.payload = json{{"injective", inj},
                                 {"surjective", surj},
                                 {"exact_middle", mid},
                                 {"short_exact", inj && surj && mid},
                                 {"dual_short_exact", dual_exact},
                                 {"double_dual_recovers", dd}};
                out.push_back(std::move(v));
            } else {
                throw Error(errc::parse_error, "unknown directive '" + words[0] + "'", lineno, 1);
            }
        } catch (const Error& e) {
            error_verdict(words.empty() ? "line" : words[0], e);
        }
    }
    return out;
}

} // namespace protori::script

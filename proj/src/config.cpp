#include "pfde/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace pfde {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string name;  // "problem", "species[0]", "reaction", "driver"
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string drop_comment(const std::string& line) {
    std::size_t p = line.find('#');
    return p == std::string::npos ? line : line.substr(0, p);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

// comment-stripped lines with braces split onto their own lines, so compact
// "name { key = value }" layouts parse the same as the expanded form
std::vector<std::pair<std::string, int>> logical_lines(const std::string& text) {
    std::vector<std::pair<std::string, int>> lines;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = drop_comment(raw);
        std::string piece;
        for (char ch : line) {
            if (ch == '{') {
                piece += " {";
                lines.emplace_back(strip(piece), lineno);
                piece.clear();
            } else if (ch == '}') {
                if (!strip(piece).empty()) lines.emplace_back(strip(piece), lineno);
                lines.emplace_back("}", lineno);
                piece.clear();
            } else {
                piece += ch;
            }
        }
        if (!strip(piece).empty()) lines.emplace_back(strip(piece), lineno);
    }
    return lines;
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    Section* cur = nullptr;
    int lineno = 0;
    std::string pending;  // multi-line bracketed value buffer
    std::string pending_key;
    int pending_line = 0;

    for (const auto& [piece, piece_line] : logical_lines(text)) {
        lineno = piece_line;
        std::string line = piece;
        if (!pending_key.empty()) {
            pending += " " + line;
            if (line.find(']') != std::string::npos) {
                cur->entries[pending_key] = {strip(pending), pending_line, false};
                pending_key.clear();
                pending.clear();
            }
            continue;
        }
        if (line.empty()) continue;
        if (line == "}") {
            if (!cur) fail(lineno, "unmatched '}'");
            cur = nullptr;
            continue;
        }
        if (line.back() == '{') {
            if (cur) fail(lineno, "nested sections are not allowed");
            Section s;
            s.name = strip(line.substr(0, line.size() - 1));
            s.line = lineno;
            sections.push_back(s);
            cur = &sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value' in '" + line + "'");
        if (!cur) fail(lineno, "key outside of any section");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (cur->entries.count(key)) fail(lineno, "duplicate key '" + key + "'");
        if (value.find('[') != std::string::npos && value.find(']') == std::string::npos) {
            pending_key = key;
            pending = value;
            pending_line = lineno;
            continue;
        }
        cur->entries[key] = {value, lineno, false};
    }
    if (!pending_key.empty()) fail(pending_line, "unterminated '[' in value of '" + pending_key + "'");
    if (cur) fail(lineno, "unterminated section '" + cur->name + "'");
    return sections;
}

double parse_number(const std::string& s, int line) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || strip(std::string(end)) != "")
        fail(line, "expected a number, got '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int line) {
    double v = parse_number(s, line);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) fail(line, "expected an integer, got '" + s + "'");
    return i;
}

std::vector<double> parse_number_list(const std::string& s, int line) {
    std::string body = strip(s);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        fail(line, "expected a bracketed list, got '" + s + "'");
    body = body.substr(1, body.size() - 2);
    for (char& c : body)
        if (c == ',') c = ' ';
    std::istringstream in(body);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number(tok, line));
    return out;
}

// "[amp phase m_1..m_k p0..p4; ...]": rows separated by ';'.
CoeffTable parse_table(const std::string& s, std::size_t driver_dim, int line) {
    std::string body = strip(s);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        fail(line, "expected a bracketed coefficient table, got '" + s + "'");
    body = body.substr(1, body.size() - 2);
    CoeffTable tab;
    std::istringstream rows(body);
    std::string row;
    while (std::getline(rows, row, ';')) {
        row = strip(row);
        if (row.empty()) continue;
        for (char& c : row)
            if (c == ',') c = ' ';
        std::istringstream in(row);
        std::vector<double> nums;
        std::string tok;
        while (in >> tok) nums.push_back(parse_number(tok, line));
        const std::size_t min_len = 2 + driver_dim + 1;
        const std::size_t max_len = 2 + driver_dim + 5;
        if (nums.size() < min_len || nums.size() > max_len)
            fail(line, "coefficient term row needs amp, phase, " + std::to_string(driver_dim) +
                           " mode integers and 1..5 polynomial coefficients");
        CoeffTerm term;
        term.amp = nums[0];
        term.phase = nums[1];
        for (std::size_t j = 0; j < driver_dim; ++j) {
            double m = nums[2 + j];
            if (m != static_cast<double>(static_cast<int>(m)))
                fail(line, "mode entries must be integers");
            term.modes.push_back(static_cast<int>(m));
        }
        for (std::size_t j = 2 + driver_dim; j < nums.size(); ++j)
            term.poly[j - 2 - driver_dim] = nums[j];
        tab.terms.push_back(term);
    }
    return tab;
}

class SectionReader {
public:
    SectionReader(Section& s) : s_(s) {}

    bool has(const std::string& key) const { return s_.entries.count(key) != 0; }

    Entry& get(const std::string& key) {
        auto it = s_.entries.find(key);
        if (it == s_.entries.end())
            throw ConfigError("config section '" + s_.name + "' (line " +
                              std::to_string(s_.line) + "): missing required key '" + key + "'");
        it->second.used = true;
        return it->second;
    }

    double number(const std::string& key) {
        Entry& e = get(key);
        return parse_number(e.value, e.line);
    }
    double number_or(const std::string& key, double dflt) {
        return has(key) ? number(key) : dflt;
    }
    int integer(const std::string& key) {
        Entry& e = get(key);
        return parse_int(e.value, e.line);
    }
    std::string word(const std::string& key) { return get(key).value; }
    std::vector<double> list(const std::string& key) {
        Entry& e = get(key);
        return parse_number_list(e.value, e.line);
    }
    CoeffTable table(const std::string& key, std::size_t driver_dim) {
        Entry& e = get(key);
        return parse_table(e.value, driver_dim, e.line);
    }

    void finish() const {
        for (const auto& [key, entry] : s_.entries)
            if (!entry.used)
                throw ConfigError("config line " + std::to_string(entry.line) +
                                  ": unknown key '" + key + "' in section '" + s_.name + "'");
    }

private:
    Section& s_;
};

std::vector<CoeffTable> read_matrix_tables(SectionReader& r, const std::string& base, int n,
                                           std::size_t k) {
    std::vector<CoeffTable> tabs;
    bool any = false;
    for (int i = 0; i < n && !any; ++i)
        for (int j = 0; j < n && !any; ++j)
            any = r.has(base + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    if (!any) return tabs;
    tabs.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::string key = base + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (r.has(key)) tabs[i * n + j] = r.table(key, k);
        }
    return tabs;
}

std::vector<CoeffTable> read_vector_tables(SectionReader& r, const std::string& base, int n,
                                           std::size_t k) {
    std::vector<CoeffTable> tabs;
    bool any = false;
    for (int i = 0; i < n && !any; ++i) any = r.has(base + "[" + std::to_string(i) + "]");
    if (!any) return tabs;
    tabs.resize(n);
    for (int i = 0; i < n; ++i) {
        std::string key = base + "[" + std::to_string(i) + "]";
        if (r.has(key)) tabs[i] = r.table(key, k);
    }
    return tabs;
}

}  // namespace

ProblemSpec parse_problem_config(const std::string& text) {
    std::vector<Section> sections = tokenize(text);
    ProblemSpec p;

    Section* problem = nullptr;
    Section* reaction = nullptr;
    Section* driver = nullptr;
    std::map<int, Section*> species;

    for (Section& s : sections) {
        if (s.name == "problem") {
            problem = &s;
        } else if (s.name == "reaction") {
            reaction = &s;
        } else if (s.name == "driver") {
            driver = &s;
        } else if (s.name.rfind("species[", 0) == 0 && s.name.back() == ']') {
            int idx = parse_int(s.name.substr(8, s.name.size() - 9), s.line);
            species[idx] = &s;
        } else {
            throw ConfigError("config line " + std::to_string(s.line) + ": unknown section '" +
                              s.name + "'");
        }
    }
    if (!problem) throw ConfigError("config: missing section 'problem'");
    if (!reaction) throw ConfigError("config: missing section 'reaction'");
    if (!driver) throw ConfigError("config: missing section 'driver'");

    {
        SectionReader r(*problem);
        p.n = r.integer("n");
        p.mesh = Mesh1D(r.number("length"), r.integer("mesh_points"));
        p.delay_steps = r.integer("delay_steps");
        r.finish();
    }
    {
        SectionReader r(*driver);
        std::vector<double> freqs = r.list("frequencies");
        p.driver.frequencies = freqs;
        if (r.has("angles")) {
            std::vector<double> angs = r.list("angles");
            if (angs.size() != freqs.size())
                throw ConfigError("driver angles and frequencies must have equal length");
            for (double& a : angs) a = wrap_angle(a);
            p.driver.angles = angs;
        } else {
            p.driver.angles.assign(freqs.size(), 0.0);
        }
        r.finish();
    }
    p.diffusion.resize(p.n);
    p.boundary.species.resize(p.n);
    for (int i = 0; i < p.n; ++i) {
        auto it = species.find(i);
        if (it == species.end())
            throw ConfigError("config: missing section 'species[" + std::to_string(i) + "]'");
        SectionReader r(*it->second);
        p.diffusion[i] = r.number("diffusion");
        std::string bc = r.word("bc");
        SpeciesBoundary& sb = p.boundary.species[i];
        if (bc == "dirichlet") {
            sb.kind = BoundaryKind::Dirichlet;
        } else if (bc == "neumann") {
            sb.kind = BoundaryKind::Neumann;
        } else if (bc == "robin") {
            sb.kind = BoundaryKind::Robin;
            sb.robin_alpha_left = r.number("robin_alpha_left");
            sb.robin_alpha_right = r.number("robin_alpha_right");
        } else {
            throw ConfigError("species[" + std::to_string(i) + "]: bc must be dirichlet, neumann or robin");
        }
        r.finish();
    }
    for (const auto& [idx, sec] : species)
        if (idx < 0 || idx >= p.n)
            throw ConfigError("config line " + std::to_string(sec->line) + ": species index " +
                              std::to_string(idx) + " out of range for n = " + std::to_string(p.n));

    {
        SectionReader r(*reaction);
        const std::size_t k = p.driver.dim();
        p.reaction.n = p.n;
        p.reaction.catalog = catalog_from_string(r.word("catalog"));
        switch (p.reaction.catalog) {
            case Catalog::Linear:
                p.reaction.A = read_matrix_tables(r, "A", p.n, k);
                p.reaction.B = read_matrix_tables(r, "B", p.n, k);
                break;
            case Catalog::DelayedLogistic:
                p.reaction.a = read_vector_tables(r, "a", p.n, k);
                p.reaction.b = read_vector_tables(r, "b", p.n, k);
                break;
            case Catalog::CooperativeLV:
                p.reaction.a = read_vector_tables(r, "a", p.n, k);
                p.reaction.b = read_vector_tables(r, "b", p.n, k);
                p.reaction.c = read_matrix_tables(r, "c", p.n, k);
                p.reaction.e = read_matrix_tables(r, "e", p.n, k);
                break;
            case Catalog::Custom: {
                int count = r.integer("terms");
                for (int t = 0; t < count; ++t) {
                    std::string base = "term[" + std::to_string(t) + "]";
                    CustomTerm term;
                    term.target = r.integer(base + ".target");
                    std::vector<double> yp = r.list(base + ".ypow");
                    std::vector<double> dp = r.list(base + ".dpow");
                    for (double v : yp) term.ypow.push_back(static_cast<int>(v));
                    for (double v : dp) term.dpow.push_back(static_cast<int>(v));
                    term.coef = r.table(base + ".coef", k);
                    p.reaction.terms.push_back(term);
                }
                break;
            }
        }
        r.finish();
    }

    p.validate();
    return p;
}

ProblemSpec load_problem_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_config(buf.str());
}

}  // namespace pfde

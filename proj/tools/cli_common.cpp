#include "cli_common.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab::cli {

namespace {

std::string strip_spaces(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    return s;
}

bool is_imag_mark(char ch) { return ch == 'i' || ch == 'j'; }

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    const std::string s = strip_spaces(text);
    if (s.empty()) throw ValidationError("empty complex literal");
    const char* p = s.c_str();
    auto read_double = [&](double& out) {
        char* end = nullptr;
        out = std::strtod(p, &end);
        if (end == p) return false;
        p = end;
        return true;
    };
    // Matches [+-]?i, consuming it and yielding the signed unit.
    auto read_unit_imag = [&]() -> std::optional<double> {
        const char* q = p;
        double sign = 1.0;
        if (*q == '+') ++q;
        else if (*q == '-') {
            sign = -1.0;
            ++q;
        }
        if (is_imag_mark(*q)) {
            p = q + 1;
            return sign;
        }
        return std::nullopt;
    };

    double re = 0.0, im = 0.0;
    if (auto unit = read_unit_imag()) {
        im = *unit;
    } else {
        double first = 0.0;
        if (!read_double(first)) throw ValidationError("cannot parse complex literal '" + text + "'");
        if (is_imag_mark(*p)) {
            ++p;
            im = first;
        } else {
            re = first;
            if (*p != '\0') {
                if (auto unit = read_unit_imag()) {
                    im = *unit;
                } else {
                    double second = 0.0;
                    if (!read_double(second) || !is_imag_mark(*p))
                        throw ValidationError("cannot parse complex literal '" + text + "'");
                    ++p;
                    im = second;
                }
            }
        }
    }
    if (*p != '\0') throw ValidationError("trailing characters in complex literal '" + text + "'");
    return {re, im};
}

namespace {

std::complex<double> parse_term_coefficient(const std::string& coef, const std::string& term) {
    if (coef.empty() || coef == "+") return 1.0;
    if (coef == "-") return -1.0;
    std::string body = coef;
    if (!body.empty() && body.back() == '*') body.pop_back();
    bool negate = false;
    while (!body.empty() && (body.front() == '+' || body.front() == '-')) {
        if (body.front() == '-') negate = !negate;
        body.erase(body.begin());
    }
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
    if (body.empty()) {
        if (negate) return -1.0;
        throw ValidationError("cannot parse polynomial term '" + term + "'");
    }
    std::complex<double> value = parse_complex(body);
    return negate ? -value : value;
}

}  // namespace

TruncatedPowerSeries parse_poly(const std::string& text) {
    const std::string s = strip_spaces(text);
    if (s.empty()) throw ValidationError("empty polynomial");

    // Split into signed terms; +/- splits only at paren depth 0 and not
    // directly after an exponent marker or '^'.
    std::vector<std::string> terms;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        else if (ch == ')') --depth;
        else if ((ch == '+' || ch == '-') && depth == 0 && i > start) {
            char prev = s[i - 1];
            if (prev != 'e' && prev != 'E' && prev != '^') {
                terms.push_back(s.substr(start, i - start));
                start = i;
            }
        }
    }
    if (depth != 0) throw ValidationError("unbalanced parentheses in polynomial '" + text + "'");
    terms.push_back(s.substr(start));

    std::vector<std::complex<double>> coefficients;
    auto deposit = [&](int power, std::complex<double> value) {
        if (power >= static_cast<int>(coefficients.size()))
            coefficients.resize(static_cast<std::size_t>(power) + 1, 0.0);
        coefficients[static_cast<std::size_t>(power)] += value;
    };

    for (const std::string& term : terms) {
        if (term.empty() || term == "+" || term == "-")
            throw ValidationError("cannot parse polynomial term in '" + text + "'");
        std::size_t zpos = std::string::npos;
        int d = 0;
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (term[i] == '(') ++d;
            else if (term[i] == ')') --d;
            else if (term[i] == 'z' && d == 0) {
                zpos = i;
                break;
            }
        }
        if (zpos == std::string::npos) {
            deposit(0, parse_term_coefficient(term, term));
            continue;
        }
        std::complex<double> coef = parse_term_coefficient(term.substr(0, zpos), term);
        std::string rest = term.substr(zpos + 1);
        int power = 1;
        if (!rest.empty()) {
            if (rest.front() != '^')
                throw ValidationError("cannot parse polynomial term '" + term + "'");
            std::string digits = rest.substr(1);
            std::size_t used = 0;
            try {
                power = std::stoi(digits, &used);
            } catch (const std::exception&) {
                throw ValidationError("bad exponent in polynomial term '" + term + "'");
            }
            if (used != digits.size() || power < 0)
                throw ValidationError("bad exponent in polynomial term '" + term + "'");
        }
        deposit(power, coef);
    }
    if (coefficients.empty()) coefficients.push_back(0.0);
    return TruncatedPowerSeries(std::move(coefficients));
}

EntryLaw parse_law(const std::string& text) {
    const std::string s = strip_spaces(text);
    auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string() : s.substr(colon + 1);
    try {
        if (head == "pareto") {
            if (args.empty()) throw ValidationError("pareto law needs an exponent, e.g. pareto:2.5");
            return standardize_pareto(std::stod(args));
        }
        if (head == "rademacher") return EntryLaw::rademacher();
        if (head == "gaussian") return EntryLaw::standard_real_gaussian();
        if (head == "complex-gaussian")
            return EntryLaw::complex_gaussian(args.empty() ? 0.0 : parse_complex(args));
        if (head == "bernoulli") {
            std::vector<std::string> parts;
            std::stringstream ss(args);
            std::string item;
            while (std::getline(ss, item, ',')) parts.push_back(item);
            if (parts.size() < 2)
                throw ValidationError("bernoulli law needs d,n, e.g. bernoulli:2,1000");
            bool centered = parts.size() > 2 && parts[2] == "centered";
            return EntryLaw::bernoulli_sparse(std::stod(parts[0]), std::stol(parts[1]), centered);
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("bad numeric argument in law '" + text + "'");
    } catch (const std::out_of_range&) {
        throw ValidationError("bad numeric argument in law '" + text + "'");
    }
    throw ValidationError("unknown entry law '" + text +
                          "' (try pareto:2.5, rademacher, gaussian, complex-gaussian:0.5, "
                          "bernoulli:2,1000)");
}

PerturbationEntry parse_entry_triple(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(strip_spaces(text));
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 3)
        throw ValidationError("entry must be row,col,value (1-based), got '" + text + "'");
    try {
        return {std::stol(parts[0]), std::stol(parts[1]), parse_complex(parts[2])};
    } catch (const std::invalid_argument&) {
        throw ValidationError("bad entry triple '" + text + "'");
    } catch (const std::out_of_range&) {
        throw ValidationError("bad entry triple '" + text + "'");
    }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed, std::uint64_t fallback) {
    if (const char* env = std::getenv("SPECLAB_SEED")) {
        std::string s(env);
        if (!s.empty()) {
            try {
                std::size_t used = 0;
                std::uint64_t value = std::stoull(s, &used);
                if (used != s.size()) throw std::invalid_argument("trailing");
                return value;
            } catch (const std::exception&) {
                throw ValidationError("SPECLAB_SEED is not an unsigned integer: '" + s + "'");
            }
        }
    }
    if (flag_seed) return *flag_seed;
    return fallback;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
    std::filesystem::path dir(out.empty() ? "." : out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os) throw ValidationError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << is.rdbuf();
    return buffer.str();
}

std::string format_complex(std::complex<double> z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.10g%+.10gi", z.real(), z.imag());
    return buf;
}

GateCheck gate_at_least(std::string name, double observed, double target) {
    return {std::move(name), observed, ">=", target, observed >= target};
}

GateCheck gate_at_most(std::string name, double observed, double target) {
    return {std::move(name), observed, "<=", target, observed <= target};
}

GateCheck gate_within(std::string name, double observed, double target, double rel_tol) {
    char rel[48];
    std::snprintf(rel, sizeof(rel), "within %g%% of", rel_tol * 100.0);
    GateCheck g{std::move(name), observed, rel, target, false};
    g.passed = std::abs(observed - target) <= rel_tol * std::abs(target);
    return g;
}

bool report_gates(const std::vector<GateCheck>& gates) {
    bool all = true;
    for (const auto& g : gates) {
        std::printf("gate %-34s %12.6g %s %g  [%s]\n", g.name.c_str(), g.observed,
                    g.relation.c_str(), g.target, g.passed ? "PASS" : "FAIL");
        all = all && g.passed;
    }
    return all;
}

}  // namespace speclab::cli

#include "polymin/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "polymin/errors.hpp"

namespace polymin {

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::string>& vars)
        : text_(text), n_vars_(static_cast<int>(vars.size())) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!is_valid_identifier(vars[i]))
                throw ParseError("invalid variable name '" + vars[i] + "'", 0);
            if (!var_index_.emplace(vars[i], static_cast<int>(i)).second)
                throw ParseError("duplicate variable name '" + vars[i] + "'", 0);
        }
    }

    Polynomial run() {
        skip_ws();
        if (at_end()) throw ParseError("empty input", pos_);
        Polynomial p = parse_expr();
        skip_ws();
        if (!at_end()) throw ParseError("unexpected trailing input", pos_);
        return p;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial parse_expr() {
        Polynomial sum = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                sum += parse_term();
            else if (accept('-'))
                sum -= parse_term();
            else
                return sum;
        }
    }

    Polynomial parse_term() {
        double sign = 1.0;
        for (;;) {
            if (accept('-'))
                sign = -sign;
            else if (accept('+'))
                ;
            else
                break;
        }
        Polynomial prod = parse_factor();
        while (accept('*')) prod = prod * parse_factor();
        return prod * sign;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_base();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("exponent must be an unsigned integer literal", pos_);
            unsigned exponent = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), exponent);
            if (ec != std::errc())
                throw ParseError("bad exponent", at);
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            Polynomial result = Polynomial::constant(n_vars_, 1.0);
            for (unsigned i = 0; i < exponent; ++i) result = result * base;
            return result;
        }
        return base;
    }

    Polynomial parse_base() {
        skip_ws();
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial inner = parse_expr();
            if (!accept(')')) throw ParseError("unbalanced parentheses", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Polynomial parse_number() {
        std::size_t at = pos_;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) throw ParseError("bad numeric literal", at);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return Polynomial::constant(n_vars_, value);
    }

    Polynomial parse_identifier() {
        std::size_t at = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        std::string name(text_.substr(at, pos_ - at));
        auto it = var_index_.find(name);
        if (it == var_index_.end())
            throw ParseError("unknown identifier '" + name + "'", at);
        return Polynomial::variable(n_vars_, it->second);
    }

    std::string_view text_;
    int n_vars_;
    std::size_t pos_ = 0;
    std::map<std::string, int, std::less<>> var_index_;
};

} // namespace

bool is_valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
    if (vars.empty()) throw ParseError("no variables declared", 0);
    return ExprParser(text, vars).run();
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        return buf;
    }
    return std::string(buf, ptr);
}

std::string format_monomial(const Monomial& m, const std::vector<std::string>& vars) {
    if (m.is_one()) return "1";
    std::string out;
    for (int i = 0; i < m.n_vars(); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += vars[static_cast<std::size_t>(i)];
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::string out;
    // terms() is grlex ascending; print descending.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        double mag = std::abs(c);
        if (out.empty())
            out += (c < 0) ? "-" : "";
        else
            out += (c < 0) ? " - " : " + ";
        if (m.is_one()) {
            out += format_double(mag);
        } else {
            if (mag != 1.0) out += format_double(mag) + "*";
            out += format_monomial(m, vars);
        }
    }
    return out;
}

} // namespace polymin

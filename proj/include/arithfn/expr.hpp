#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

#include "arithfn/dirichlet.hpp"

namespace arithfn {

namespace detail {

/**
 * Recursive-descent reader for the little function grammar:
 *
 *   expr := e | u | mu | d | phi | norm | sigma_<k>
 *         | inv(expr) | conv(expr, expr) | add(expr, expr)
 *         | scale(<scalar>, expr) | tm{label:value, ...}
 *
 * Scalars are field literals ("3", "-2/5"); tm keys are prime labels of the
 * underlying monoid, and unlisted primes default to 1.
 */
class FnParser {
public:
    FnParser(std::string text, MonoidPtr m, FieldId k)
        : text_(std::move(text)), monoid_(std::move(m)), field_(k) {}

    ArithFn parse() {
        ArithFn out = expr();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input after expression");
        return out;
    }

private:
    ArithFn expr() {
        skip_space();
        std::string head = word();
        if (head.empty()) fail("expected a function name");
        if (head == "e") return ArithFn::identity_e(monoid_, field_);
        if (head == "u") return ArithFn::unit_u(monoid_, field_);
        if (head == "mu") return ArithFn::moebius(monoid_, field_);
        if (head == "d") return ArithFn::divisor_count(monoid_, field_);
        if (head == "phi") return ArithFn::euler_phi(monoid_, field_);
        if (head == "norm") return ArithFn::ideal_norm(monoid_, field_);
        if (head.rfind("sigma_", 0) == 0) {
            std::string tail = head.substr(6);
            if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
                fail("sigma needs a nonnegative integer suffix, got '" + head + "'");
            return ArithFn::sigma(monoid_, field_, std::stoul(tail));
        }
        if (head == "inv") {
            expect('(');
            ArithFn f = expr();
            expect(')');
            return dirichlet_inverse(f);
        }
        if (head == "conv" || head == "add") {
            expect('(');
            ArithFn f = expr();
            expect(',');
            ArithFn g = expr();
            expect(')');
            return head == "conv" ? convolve(f, g) : add(f, g);
        }
        if (head == "scale") {
            expect('(');
            Scalar c = Scalar::parse(chunk_until(','), field_);
            expect(',');
            ArithFn f = expr();
            expect(')');
            return scale(c, f);
        }
        if (head == "tm") return totally_mult_literal();
        fail("unknown function '" + head + "'");
    }

    ArithFn totally_mult_literal() {
        expect('{');
        TotallyMultData data{{}, Scalar::one(field_)};
        skip_space();
        if (peek() != '}') {
            while (true) {
                std::string label = trim(chunk_until(':'));
                expect(':');
                skip_space();
                char closer = 0;
                std::string value = value_chunk(&closer);
                auto id = monoid_->find_prime_by_label(label);
                if (!id) fail("tm: no prime labeled '" + label + "' in " + monoid_->signature());
                data.values[*id] = Scalar::parse(trim(value), field_);
                if (closer == '}') break;
                expect(',');
            }
        }
        expect('}');
        return ArithFn::totally_mult(monoid_, field_, std::move(data), "tm");
    }

    // -- lexing helpers -----------------------------------------------------

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string word() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    /// Raw text up to (not consuming) the delimiter.
    std::string chunk_until(char delim) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != delim) ++pos_;
        if (pos_ == text_.size()) fail(std::string("expected '") + delim + "'");
        return trim(text_.substr(start, pos_ - start));
    }

    /// Raw text up to ',' or '}', not consuming; reports which stopped us.
    std::string value_chunk(char* closer) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}') ++pos_;
        if (pos_ == text_.size()) fail("unterminated tm{...} literal");
        *closer = text_[pos_];
        return text_.substr(start, pos_ - start);
    }

    static std::string trim(std::string s) {
        std::size_t a = s.find_first_not_of(" \t");
        std::size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? "" : s.substr(a, b - a + 1);
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("fn parse error at offset " + std::to_string(pos_) + ": " +
                                    why);
    }

    std::string text_;
    MonoidPtr monoid_;
    FieldId field_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse a function expression over the given monoid and scalar field.
inline ArithFn parse_fn(const std::string& text, const MonoidPtr& m, FieldId k) {
    return detail::FnParser(text, m, k).parse();
}

}  // namespace arithfn

#include <cctype>

#include "json.hpp"
#include "qlat/lattice.hpp"

namespace qlat {

namespace {

using nlohmann::json;

class ShorthandParser {
public:
    ShorthandParser(const Ring& r, const std::string& s) : r_(r), s_(s) {}

    Lattice parse() {
        Lattice l = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return l;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error("lattice: cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    // Reads one element up to a top-level ',', '+', ':', ')' or '^'.
    RingElt element() {
        skip();
        size_t start = pos_;
        int depth = 0;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '[' || c == '(') ++depth;
            if (c == ']' || c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (depth == 0 && (c == ',' || c == '+' || c == '^' || c == ':')) break;
            ++pos_;
        }
        if (start == pos_) fail("expected a ring element");
        return parse_element(*r_, s_.substr(start, pos_ - start));
    }

    Lattice expr() {
        accept("sum:");
        std::vector<Lattice> parts{term()};
        while (accept("+")) parts.push_back(term());
        return parts.size() == 1 ? parts.front() : orthogonal_sum(parts);
    }

    Lattice term() {
        Lattice base = atom();
        if (accept("^")) {
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected an exponent");
            int n = std::stoi(s_.substr(start, pos_ - start));
            if (n < 1) fail("exponent must be positive");
            base = power(base, n);
        }
        return base;
    }

    Lattice atom() {
        if (accept("(")) {
            Lattice l = expr();
            if (!accept(")")) fail("expected ')'");
            return l;
        }
        if (accept("diag:")) {
            std::vector<RingElt> es{element()};
            while (accept(",")) es.push_back(element());
            return diagonal(r_, es);
        }
        if (accept("gram:")) {
            skip();
            size_t start = pos_;
            int depth = 0;
            do {
                if (pos_ >= s_.size()) fail("unterminated Gram matrix");
                if (s_[pos_] == '[') ++depth;
                if (s_[pos_] == ']') --depth;
                ++pos_;
            } while (depth > 0);
            return Lattice::unchecked(r_, gram_from_json(json::parse(s_.substr(start, pos_ - start))));
        }
        if (accept("scale:")) {
            RingElt a = element();
            if (!accept(":")) fail("expected ':' after scale factor");
            return scaled(a, atom());
        }
        if (accept("H")) return hyperbolic(r_, accept(":") ? element() : r_->one());
        if (accept("A")) return anisotropic(r_, accept(":") ? element() : r_->one());
        fail("expected diag:, H, A, gram:, scale: or '('");
    }

    RingMatrix gram_from_json(const json& j) {
        if (!j.is_array() || j.empty()) fail("Gram matrix must be a nonempty array");
        int n = static_cast<int>(j.size());
        RingMatrix g = zeros(*r_, n, n);
        for (int i = 0; i < n; ++i) {
            if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) fail("Gram matrix must be square");
            for (int c = 0; c < n; ++c) {
                const json& e = j[i][c];
                g(i, c) = e.is_string() ? parse_element(*r_, e.get<std::string>())
                                        : r_->from_int(e.get<int64_t>());
            }
        }
        return g;
    }

    const Ring& r_;
    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

std::string gram_to_string(const RingMatrix& g) {
    json rows = json::array();
    for (int i = 0; i < g.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j).to_string());
        rows.push_back(row);
    }
    return rows.dump();
}

Lattice parse_lattice(const Ring& r, const std::string& text) {
    size_t first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(std::string("lattice JSON: ") + e.what());
        }
        if (!j.contains("ring") || !j.contains("gram")) throw Error("lattice JSON needs 'ring' and 'gram'");
        if (parse_ring(j["ring"].get<std::string>())->to_string() != r->to_string())
            throw Error("lattice: JSON ring " + j["ring"].get<std::string>() + " differs from " + r->to_string());
        return ShorthandParser(r, "gram:" + j["gram"].dump()).parse();
    }
    Lattice l = ShorthandParser(r, text).parse();
    return l;
}

std::string lattice_to_json(const Lattice& l) {
    json j;
    j["ring"] = l.ring().to_string();
    j["gram"] = json::parse(gram_to_string(l.gram()));
    return j.dump();
}

Lattice lattice_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("lattice JSON: ") + e.what());
    }
    if (!j.contains("ring") || !j.contains("gram")) throw Error("lattice JSON needs 'ring' and 'gram'");
    Ring r = parse_ring(j["ring"].get<std::string>());
    return ShorthandParser(r, "gram:" + j["gram"].dump()).parse();
}

}  // namespace qlat

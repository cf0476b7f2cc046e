#include <cctype>
#include <cstdlib>
#include <sstream>

#include "abesov/operator.hpp"

namespace abesov {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Operator parse() {
        Operator op = parse_spec();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return op;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "operator spec, column " << pos_ + 1 << ": " << what << " in \"" << s_ << "\"";
        throw ParseError(os.str());
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string word() {
        skip();
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected a name");
        return s_.substr(start, pos_ - start);
    }

    double number() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<size_t>(end - begin);
        return v;
    }

    std::vector<double> list() {
        expect('[');
        std::vector<double> out;
        if (accept(']')) return out;
        do {
            out.push_back(number());
        } while (accept(','));
        expect(']');
        return out;
    }

    // optional "key=" prefix
    void key(const char* name) {
        skip();
        size_t save = pos_;
        std::string w;
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            w = word();
            if (w == name && accept('=')) return;
        }
        pos_ = save;
    }

    Operator parse_spec() {
        std::string kind = word();
        if (kind == "diagonal") {
            auto v = list();
            if (v.empty()) fail("diagonal needs at least one entry");
            return Operator::diagonal(Eigen::Map<RealVec>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
        if (kind == "dense") {
            expect('[');
            std::vector<std::vector<double>> rows;
            do {
                rows.push_back(list());
            } while (accept(','));
            expect(']');
            size_t n = rows.size();
            for (auto& r : rows)
                if (r.size() != n) fail("dense matrix must be square");
            Eigen::MatrixXcd m(n, n);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
            return Operator::dense(m);
        }
        if (kind == "torus_laplacian") {
            int n = 0, dims = 1;
            for (;;) {
                skip();
                if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_]))) break;
                std::string k = word();
                expect('=');
                double v = number();
                if (k == "n")
                    n = static_cast<int>(v);
                else if (k == "dims")
                    dims = static_cast<int>(v);
                else
                    fail("unknown torus_laplacian parameter '" + k + "'");
            }
            if (n < 2) fail("torus_laplacian needs n >= 2");
            return Operator::torus_laplacian(n, dims);
        }
        if (kind == "shifted") {
            expect('(');
            Operator base = parse_spec();
            expect(',');
            key("eps");
            double eps = number();
            expect(')');
            return Operator::shifted(base, eps);
        }
        if (kind == "inverse") {
            expect('(');
            Operator base = parse_spec();
            expect(')');
            return Operator::inverse(base);
        }
        if (kind == "frac_power") {
            expect('(');
            Operator base = parse_spec();
            expect(',');
            key("alpha");
            double a = number();
            expect(')');
            return Operator::frac_power(base, a);
        }
        fail("unknown operator kind '" + kind + "'");
    }
};

}  // namespace

Operator build_operator(const std::string& spec) { return Parser(spec).parse(); }

}  // namespace abesov

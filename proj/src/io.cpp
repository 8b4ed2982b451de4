#include "cmtk/io.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace cmtk {

namespace {

std::string location(const SequenceToken& t, std::size_t index) {
    if (t.line > 0) return "line " + std::to_string(t.line);
    return "element " + std::to_string(index);
}

class ArrayCollector : public nlohmann::json_sax<nlohmann::json> {
public:
    std::vector<SequenceToken> tokens;

    bool null() override { return fail("null"); }
    bool boolean(bool) override { return fail("boolean"); }
    bool number_integer(number_integer_t v) override { return push(std::to_string(v)); }
    bool number_unsigned(number_unsigned_t v) override { return push(std::to_string(v)); }
    bool number_float(number_float_t, const string_t& s) override { return push(s); }
    bool string(string_t& s) override { return push(s); }
    bool binary(binary_t&) override { return fail("binary"); }
    bool start_object(std::size_t) override { return fail("object"); }
    bool key(string_t&) override { return fail("object"); }
    bool end_object() override { return fail("object"); }
    bool start_array(std::size_t) override {
        if (depth_++ > 0) return fail("nested array");
        return true;
    }
    bool end_array() override {
        --depth_;
        return true;
    }
    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
        throw ParseError("JSON syntax error at byte " + std::to_string(position) + ": " + ex.what());
    }

private:
    bool push(std::string text) {
        if (depth_ != 1) return fail("scalar outside array");
        tokens.push_back({std::move(text), 0});
        return true;
    }
    bool fail(const std::string& what) {
        throw ParseError("JSON sequence: unexpected " + what + " at element " + std::to_string(tokens.size()));
    }
    int depth_ = 0;
};

}  // namespace

std::vector<SequenceToken> tokenize_csv(const std::string& content) {
    std::vector<SequenceToken> tokens;
    std::istringstream in(content);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto field = line.substr(first, line.find(',', first) - first);
        while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.pop_back();
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
        tokens.push_back({field, number});
    }
    return tokens;
}

std::vector<SequenceToken> tokenize_json(const std::string& content) {
    ArrayCollector collector;
    nlohmann::json::sax_parse(content, &collector);
    return collector.tokens;
}

AnySequence parse_sequence(const std::vector<SequenceToken>& tokens, std::optional<Mode> mode, double step) {
    if (tokens.empty()) throw ParseError("sequence is empty");
    std::vector<std::optional<Rational>> exact(tokens.size());
    bool all_rational = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        exact[i] = try_parse_rational(tokens[i].text);
        all_rational = all_rational && exact[i].has_value();
    }
    const Mode resolved = mode.value_or(all_rational ? Mode::exact : Mode::floating);
    if (resolved == Mode::exact) {
        Vector<Rational> v(static_cast<Index>(tokens.size()));
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!exact[i])
                throw ParseError(location(tokens[i], i) + ": not a rational number: '" + tokens[i].text + "'");
            v(static_cast<Index>(i)) = *exact[i];
        }
        return Sequence<Rational>(std::move(v), step);
    }
    Eigen::VectorXd v(static_cast<Index>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (exact[i]) {
            v(static_cast<Index>(i)) = to_double(*exact[i]);
            continue;
        }
        try {
            std::size_t used = 0;
            v(static_cast<Index>(i)) = std::stod(tokens[i].text, &used);
            if (used != tokens[i].text.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(location(tokens[i], i) + ": not a number: '" + tokens[i].text + "'");
        }
        if (!std::isfinite(v(static_cast<Index>(i))))
            throw ParseError(location(tokens[i], i) + ": value is not finite");
    }
    return Sequence<double>(std::move(v), step);
}

AnySequence read_sequence_file(const std::string& path, std::optional<Mode> mode, double step) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    const auto first = content.find_first_not_of(" \t\r\n");
    const bool json = first != std::string::npos && content[first] == '[';
    return parse_sequence(json ? tokenize_json(content) : tokenize_csv(content), mode, step);
}

}  // namespace cmtk

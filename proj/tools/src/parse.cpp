// SPDX-License-Identifier: Apache-2.0

#include "parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace lame_spectra::cli {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& text)
{
    throw Error(ErrorKind::invalid_argument, what + " '" + text + "'");
}

std::string strip(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& context)
{
    std::string body = s;
    if (!body.empty() && body[0] == '+')
        body.erase(0, 1);
    if (body.empty() || body[0] == '+')
        bad("malformed number in", context);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v))
        bad("malformed number in", context);
    return v;
}

long parse_integer(const std::string& s, const std::string& context)
{
    std::string body = s;
    if (!body.empty() && body[0] == '+')
        body.erase(0, 1);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size())
        bad("malformed integer in", context);
    return v;
}

} // namespace

cplx parse_complex(const std::string& text)
{
    const std::string s = strip(text);
    if (s.empty())
        bad("empty complex number", text);
    if (s.back() != 'i')
        return {parse_number(s, text), 0.0};

    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string re_text = split == std::string::npos ? "" : body.substr(0, split);
    const std::string im_text = split == std::string::npos ? body : body.substr(split);
    double im = 0.0;
    if (im_text.empty() || im_text == "+")
        im = 1.0;
    else if (im_text == "-")
        im = -1.0;
    else
        im = parse_number(im_text, text);
    const double re = re_text.empty() ? 0.0 : parse_number(re_text, text);
    return {re, im};
}

std::string format_real(double x)
{
    if (x == 0.0)
        x = 0.0; // drops the sign of -0
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_complex(cplx z)
{
    const double re = z.real();
    const double im = z.imag();
    if (im == 0.0)
        return format_real(re);
    if (re == 0.0)
        return format_real(im) + "i";
    return format_real(re) + (im < 0.0 ? "-" : "+") + format_real(std::abs(im)) + "i";
}

std::string EtaSpec::canonical() const
{
    if (rational)
        return std::to_string(rational->P) + "/" + std::to_string(rational->Q);
    return format_complex(value);
}

EtaSpec parse_eta(const std::string& text)
{
    const std::string s = strip(text);
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        const cplx v = parse_complex(s);
        if (v == cplx(0.0))
            bad("eta must be nonzero, got", text);
        return {v, std::nullopt};
    }
    long p = parse_integer(s.substr(0, slash), text);
    long q = parse_integer(s.substr(slash + 1), text);
    if (q == 0 || p == 0)
        bad("rational eta needs nonzero P and Q, got", text);
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const long g = std::gcd(p, q);
    const RationalEta re{p / g, q / g};
    return {cplx(re.value(), 0.0), re};
}

cplx parse_tau(const std::string& text)
{
    const cplx tau = parse_complex(text);
    if (!(tau.imag() > 0.0))
        throw Error(ErrorKind::divergence, "tau must have positive imaginary part, got '" + text + "'");
    return tau;
}

std::vector<cplx> parse_complex_list(const std::string& text)
{
    std::vector<cplx> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (strip(item).empty())
            bad("empty entry in list", text);
        out.push_back(parse_complex(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::invalid_argument, "cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::invalid_argument,
                        "config line " + std::to_string(lineno) + " is not key=value: '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        while (!key.empty() && key[0] == '-')
            key.erase(0, 1);
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw Error(ErrorKind::invalid_argument, "config line " + std::to_string(lineno) + " has an empty key");
        out[key] = value;
    }
    return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& argv)
{
    std::vector<std::string> out;
    std::optional<std::string> config_path;
    std::set<std::string> given;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argv.size())
                throw Error(ErrorKind::invalid_argument, "--config needs a file name");
            config_path = argv[++i];
            continue;
        }
        if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
            continue;
        }
        if (a.rfind("--", 0) == 0 && a.size() > 2)
            given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
        out.push_back(a);
    }
    if (!config_path)
        return out;
    for (const auto& [key, value] : read_config_file(*config_path)) {
        if (given.count(key))
            continue;
        if (value == "true") {
            out.push_back("--" + key);
        } else if (value != "false") {
            out.push_back("--" + key + "=" + value); // one token, so values may start with '-'
        }
    }
    return out;
}

} // namespace lame_spectra::cli

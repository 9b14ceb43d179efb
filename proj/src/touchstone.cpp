#include "mpq/touchstone.hpp"

#include "mpq/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mpq {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorCode::parse, "touchstone line " + std::to_string(line) + ": " + what);
}

double to_number(std::string_view tok, std::size_t line) {
    double v = 0.0;
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        parse_fail(line, "expected a number, got '" + std::string(tok) + "'");
    }
    return v;
}

struct Options {
    FrequencyUnit unit = FrequencyUnit::ghz;
    NetworkKind kind = NetworkKind::scattering;
    DataFormat format = DataFormat::ma;
    double reference = 50.0;
};

Options parse_options(std::string_view line, std::size_t lineno) {
    Options opt;
    auto toks = split_ws(line.substr(1));
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = lower(toks[i]);
        if (t == "hz") {
            opt.unit = FrequencyUnit::hz;
        } else if (t == "khz") {
            opt.unit = FrequencyUnit::khz;
        } else if (t == "mhz") {
            opt.unit = FrequencyUnit::mhz;
        } else if (t == "ghz") {
            opt.unit = FrequencyUnit::ghz;
        } else if (t == "s") {
            opt.kind = NetworkKind::scattering;
        } else if (t == "y") {
            opt.kind = NetworkKind::admittance;
        } else if (t == "z") {
            opt.kind = NetworkKind::impedance;
        } else if (t == "ri") {
            opt.format = DataFormat::ri;
        } else if (t == "ma") {
            opt.format = DataFormat::ma;
        } else if (t == "db") {
            opt.format = DataFormat::db;
        } else if (t == "r") {
            if (i + 1 >= toks.size()) {
                parse_fail(lineno, "option 'R' needs a reference resistance");
            }
            opt.reference = to_number(toks[++i], lineno);
            if (!(opt.reference > 0.0)) {
                parse_fail(lineno, "reference resistance must be positive");
            }
        } else if (t == "g" || t == "h") {
            parse_fail(lineno, "unsupported parameter type '" + std::string(toks[i]) + "'");
        } else {
            parse_fail(lineno, "malformed option line near '" + std::string(toks[i]) + "'");
        }
    }
    return opt;
}

cplx decode(double a, double b, DataFormat fmt) {
    switch (fmt) {
    case DataFormat::ri:
        return {a, b};
    case DataFormat::ma:
        return std::polar(a, b * pi / 180.0);
    case DataFormat::db:
        return std::polar(std::pow(10.0, a / 20.0), b * pi / 180.0);
    }
    return {a, b};
}

// Position (row, col) of the k-th complex value in a record.
std::pair<int, int> entry_position(int ports, int k) {
    if (ports == 2) {
        // 2-port records are column-major: 11 21 12 22.
        return {k % 2, k / 2};
    }
    return {k / ports, k % ports};
}

} // namespace

MultiportNetwork parse_touchstone(std::string_view text, int ports) {
    if (ports < 1) {
        fail(ErrorCode::invalid_argument, "touchstone port count must be positive");
    }
    const std::size_t per_record = 1 + 2 * static_cast<std::size_t>(ports) * static_cast<std::size_t>(ports);

    Options opt;
    bool have_options = false;
    std::vector<double> freqs;
    std::vector<CMatrix> samples;
    std::vector<double> pending;
    std::size_t record_line = 0;

    auto flush = [&](std::size_t lineno) {
        CMatrix m(ports, ports);
        for (int k = 0; k < ports * ports; ++k) {
            const auto [r, c] = entry_position(ports, k);
            m(r, c) = decode(pending[1 + 2 * static_cast<std::size_t>(k)],
                             pending[2 + 2 * static_cast<std::size_t>(k)], opt.format);
        }
        const double f = pending[0];
        if (!(f >= 0.0)) {
            parse_fail(lineno, "negative frequency");
        }
        if (!freqs.empty() && !(f > freqs.back())) {
            parse_fail(record_line, "frequencies must be strictly increasing");
        }
        freqs.push_back(f);
        samples.push_back(std::move(m));
        pending.clear();
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            line = line.substr(0, bang);
        }
        auto toks = split_ws(line);
        if (toks.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (toks.front().front() == '#') {
            if (have_options) {
                parse_fail(lineno, "second option line");
            }
            if (!freqs.empty() || !pending.empty()) {
                parse_fail(lineno, "option line after data");
            }
            opt = parse_options(line.substr(line.find('#')), lineno);
            have_options = true;
            continue;
        }
        if (toks.front().front() == '[') {
            parse_fail(lineno, "Touchstone v2 keywords are not supported");
        }
        if (pending.empty()) {
            record_line = lineno;
        }
        if (pending.size() + toks.size() > per_record) {
            parse_fail(lineno, "wrong token count for a " + std::to_string(ports) + "-port record (expected " +
                                   std::to_string(per_record) + " values per frequency)");
        }
        for (auto t : toks) {
            pending.push_back(to_number(t, lineno));
        }
        // 1- and 2-port records must sit on one line.
        if (ports <= 2 && pending.size() != per_record) {
            parse_fail(lineno, "wrong token count for a " + std::to_string(ports) + "-port record (expected " +
                                   std::to_string(per_record) + ", got " + std::to_string(pending.size()) + ")");
        }
        if (pending.size() == per_record) {
            flush(lineno);
        }
        if (end == text.size()) {
            break;
        }
    }
    if (!pending.empty()) {
        parse_fail(record_line, "incomplete record at end of data");
    }
    if (freqs.empty()) {
        fail(ErrorCode::parse, "touchstone data contains no records");
    }
    if (freqs.front() <= 0.0) {
        fail(ErrorCode::parse, "touchstone line " + std::to_string(record_line) +
                                   ": frequencies must be positive for Q analysis");
    }

    // v1 stores Z and Y normalised to the reference resistance.
    if (opt.kind != NetworkKind::scattering) {
        const double scale = opt.kind == NetworkKind::impedance ? opt.reference : 1.0 / opt.reference;
        for (auto& m : samples) {
            m *= scale;
        }
    }

    const double k = 2.0 * pi * unit_scale(opt.unit);
    std::vector<double> omega(freqs.size());
    std::transform(freqs.begin(), freqs.end(), omega.begin(), [k](double f) { return f * k; });
    return MultiportNetwork(FrequencyGrid(std::move(omega), opt.unit), opt.kind, std::move(samples),
                            opt.reference);
}

int ports_from_extension(const std::filesystem::path& path) {
    const std::string ext = lower(path.extension().string());
    if (ext.size() < 4 || ext[0] != '.' || ext.back() != 'p') {
        return 0;
    }
    const char kind = ext[1];
    if (kind != 's' && kind != 'y' && kind != 'z') {
        return 0;
    }
    int n = 0;
    const auto res = std::from_chars(ext.data() + 2, ext.data() + ext.size() - 1, n);
    if (res.ec != std::errc() || res.ptr != ext.data() + ext.size() - 1 || n < 1) {
        return 0;
    }
    return n;
}

MultiportNetwork read_touchstone(const std::filesystem::path& path) {
    const int ports = ports_from_extension(path);
    if (ports == 0) {
        fail(ErrorCode::parse, "cannot infer the port count from '" + path.string() + "' (expected .sNp)");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_touchstone(ss.str(), ports);
}

namespace {

// Frequency in the output unit whose product with k restores omega exactly,
// when such a double exists within a few ulps.
double exact_frequency(double omega, double k) {
    double f = omega / k;
    if (f * k == omega) {
        return f;
    }
    double up = f;
    double down = f;
    for (int i = 0; i < 8; ++i) {
        up = std::nextafter(up, INFINITY);
        down = std::nextafter(down, 0.0);
        if (up * k == omega) {
            return up;
        }
        if (down * k == omega) {
            return down;
        }
    }
    return f;
}

} // namespace

std::string write_touchstone(const MultiportNetwork& net, DataFormat format) {
    for (double r : net.reference()) {
        if (r != net.reference().front()) {
            fail(ErrorCode::invalid_argument, "Touchstone v1 carries one reference resistance for all ports");
        }
    }
    std::ostringstream os;
    const char* fmt = format == DataFormat::ri ? "RI" : format == DataFormat::ma ? "MA" : "DB";
    os << "! written by mpq\n";
    os << "# " << unit_name(net.grid().unit()) << ' ' << kind_letter(net.kind()) << ' ' << fmt << " R "
       << format_double(net.reference().front()) << '\n';
    const int p = net.ports();
    const double k = 2.0 * pi * unit_scale(net.grid().unit());
    for (std::size_t i = 0; i < net.grid().size(); ++i) {
        os << format_double(exact_frequency(net.grid()[i], k));
        CMatrix m = net.sample(i);
        if (net.kind() == NetworkKind::impedance) {
            m /= net.reference().front();
        } else if (net.kind() == NetworkKind::admittance) {
            m *= net.reference().front();
        }
        for (int e = 0; e < p * p; ++e) {
            const auto [r, c] = entry_position(p, e);
            const cplx v = m(r, c);
            double a = v.real();
            double b = v.imag();
            if (format == DataFormat::ma) {
                a = std::abs(v);
                b = std::arg(v) * 180.0 / pi;
            } else if (format == DataFormat::db) {
                a = 20.0 * std::log10(std::abs(v));
                b = std::arg(v) * 180.0 / pi;
            }
            // N >= 3: each matrix row starts a new line, at most four pairs per line.
            if (p >= 3 && e > 0 && (e % p == 0 || (e % p) % 4 == 0)) {
                os << "\n ";
            }
            os << ' ' << format_double(a) << ' ' << format_double(b);
        }
        os << '\n';
    }
    return os.str();
}

std::string write_csv(const MultiportNetwork& net) {
    std::ostringstream os;
    const int p = net.ports();
    const char* x = kind_letter(net.kind());
    os << "omega";
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) {
            os << ',' << x << r + 1 << '_' << c + 1 << "_re," << x << r + 1 << '_' << c + 1 << "_im";
        }
    }
    os << '\n';
    for (std::size_t i = 0; i < net.grid().size(); ++i) {
        os << format_double(net.grid()[i]);
        for (int r = 0; r < p; ++r) {
            for (int c = 0; c < p; ++c) {
                os << ',' << format_double(net.sample(i)(r, c).real()) << ','
                   << format_double(net.sample(i)(r, c).imag());
            }
        }
        os << '\n';
    }
    return os.str();
}

} // namespace mpq

#include "core/coefficients.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/numeric.hpp"

#include <cmath>
#include <sstream>

namespace linproc {

CoefficientSeq::CoefficientSeq(std::vector<double> values, double tail_l2)
    : values_(std::move(values)), tail_l2_(tail_l2) {
    if (values_.empty()) values_.push_back(0.0);
    for (double v : values_) require(std::isfinite(v), "coefficients must be finite");
    require(std::isfinite(tail_l2_) && tail_l2_ >= 0.0, "tail_l2 must be a finite non-negative bound");
}

double CoefficientSeq::l2_norm_sq() const {
    CompensatedSum s;
    for (double v : values_) s.add(v * v);
    s.add(tail_l2_);
    return s.value();
}

std::vector<double> partial_sums(const CoefficientSeq& a, std::size_t m) {
    std::vector<double> b(m + 1, 0.0);
    CompensatedSum s;
    for (std::size_t j = 1; j <= m; ++j) {
        s.add(a[j - 1]);
        b[j] = s.value();
    }
    return b;
}

std::vector<double> projection_norms(const CoefficientSeq& a) {
    std::vector<double> out;
    out.reserve(a.values().size());
    for (double v : a.values()) out.push_back(std::fabs(v));
    return out;
}

std::vector<CoefficientRun> coefficient_runs(const CoefficientSeq& a) {
    std::vector<CoefficientRun> runs;
    const auto v = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!runs.empty() && runs.back().value == v[i])
            runs.back().last = i;
        else
            runs.push_back({i, i, v[i]});
    }
    return runs;
}

std::string coefficients_csv(const CoefficientSeq& a, const std::string& header_comment) {
    std::ostringstream out;
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    if (!a.exact()) out << "# tail_l2=" << csv::format_double(a.tail_l2()) << '\n';
    out << "index,a_i\n";
    const auto v = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) out << i << ',' << csv::format_double(v[i]) << '\n';
    return out.str();
}

void write_coefficients_csv(const CoefficientSeq& a, const std::string& path, const std::string& header_comment) {
    csv::write_file(path, coefficients_csv(a, header_comment));
}

CoefficientSeq parse_coefficients_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    double tail = 0.0;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = csv::trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto comment = csv::trim(body.substr(1));
            constexpr std::string_view key = "tail_l2=";
            if (comment.starts_with(key)) tail = csv::parse_double(comment.substr(key.size()));
            continue;
        }
        const auto fields = csv::split_row(body);
        if (!header_seen) {
            if (fields.size() != 2 || csv::trim(fields[0]) != "index" || csv::trim(fields[1]) != "a_i")
                fail(ErrorCode::parse, "coefficient CSV must start with header 'index,a_i'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 2)
            fail(ErrorCode::parse, "coefficient CSV line " + std::to_string(line_no) + ": expected 2 columns");
        const auto index = csv::parse_uint(fields[0]);
        if (index != values.size())
            fail(ErrorCode::parse, "coefficient CSV line " + std::to_string(line_no) + ": indices must run 0,1,2,...");
        values.push_back(csv::parse_double(fields[1]));
    }
    if (!header_seen) fail(ErrorCode::parse, "coefficient CSV has no header");
    if (values.empty()) fail(ErrorCode::parse, "coefficient CSV has no rows");
    return CoefficientSeq(std::move(values), tail);
}

CoefficientSeq read_coefficients_csv(const std::string& path) { return parse_coefficients_csv(csv::read_file(path)); }

} // namespace linproc

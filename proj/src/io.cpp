#include "nwopt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nwopt/error.hpp"

namespace nwopt::io {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_real(std::string_view text, double& value)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

// Header columns "<prefix>1", "<prefix>2", ... ; returns the run length.
std::size_t count_prefixed(const std::vector<std::string_view>& cols, std::size_t from,
                           std::string_view prefix)
{
    std::size_t k = 0;
    while (from + k < cols.size() &&
           trim(cols[from + k]) == std::string(prefix) + std::to_string(k + 1)) {
        ++k;
    }
    return k;
}

}  // namespace

std::string format_real(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    const auto fields = split(text, ',');
    for (std::size_t k = 0; k < fields.size(); ++k) {
        double v = 0.0;
        if (!parse_real(fields[k], v)) {
            throw Error(ErrorCode::ParseError, "entry " + std::to_string(k + 1) + " of '" +
                                                   std::string(text) + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

Dataset read_dataset_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "line 1: missing header");
    }
    const auto header = split(line, ',');
    const std::size_t p = count_prefixed(header, 0, "g");
    const std::size_t q = count_prefixed(header, p, "xi");
    if (p == 0 || q == 0 || p + q != header.size()) {
        throw Error(ErrorCode::ParseError,
                    "line 1: header must read g1,...,gp,xi1,...,xiq with p, q >= 1");
    }

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != p + q) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(p + q) + " columns, found " +
                            std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_real(fields[c], row[c])) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ", column " +
                                std::to_string(c + 1) + ": cannot parse '" +
                                std::string(trim(fields[c])) + "'");
            }
            if (!std::isfinite(row[c])) {
                throw Error(ErrorCode::NonFiniteEntry,
                            "line " + std::to_string(line_no) + ", column " +
                                std::to_string(c + 1) + ": non-finite value");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::ParseError, "no data rows after the header");
    }
    return validate_dataset(rows, p, q);
}

Dataset read_dataset_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    for (std::size_t j = 0; j < data.covariate_dim(); ++j) {
        out << (j ? "," : "") << 'g' << j + 1;
    }
    for (std::size_t j = 0; j < data.outcome_dim(); ++j) {
        out << ",xi" << j + 1;
    }
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        bool first = true;
        for (double v : data.covariate(i)) {
            out << (first ? "" : ",") << format_real(v);
            first = false;
        }
        for (double v : data.outcome(i)) {
            out << ',' << format_real(v);
        }
        out << '\n';
    }
}

void write_dataset_csv_file(const std::string& path, const Dataset& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
    write_dataset_csv(out, data);
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}

void write_trials_csv(std::ostream& out, const ExperimentReport& report)
{
    out << "trial_index,seed,n,bandwidth,estimate,truth,surrogate,abs_error,bias_component,"
           "mad_component,neighbor_count,empty_neighborhood,gap,bound_violated\n";
    for (const auto& r : report.records) {
        out << r.trial_index << ',' << r.seed << ',' << r.n << ',' << format_real(r.bandwidth)
            << ',' << format_real(r.estimate) << ',' << format_real(r.truth) << ','
            << format_real(r.surrogate) << ',' << format_real(r.abs_error) << ','
            << format_real(r.bias_component) << ',' << format_real(r.mad_component) << ','
            << r.neighbor_count << ',' << (r.empty_neighborhood ? 1 : 0) << ','
            << (r.gap ? format_real(*r.gap) : std::string()) << ','
            << (r.bound_violated ? 1 : 0) << '\n';
    }
}

}  // namespace nwopt::io

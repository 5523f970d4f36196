#include "smc/models/observations_csv.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::models {

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        fields.push_back(std::move(field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

Eigen::MatrixXd read_observations_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    // Skip leading comment lines.
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] != '#') break;
    }
    if (line.empty() || line[0] == '#') fail(Errc::ConfigError, "observation CSV: missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_fields(line);
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] != fmt::format("y_{}", j + 1))
            fail(Errc::ConfigError, fmt::format("observation CSV: expected column y_{}, found '{}'", j + 1, header[j]));

    const std::size_t dy = header.size();
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (fields.size() != dy)
            fail(Errc::ConfigError, fmt::format("observation CSV line {}: expected {} fields", line_no, dy));
        for (const auto& f : fields) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                fail(Errc::ConfigError, fmt::format("observation CSV line {}: bad number '{}'", line_no, f));
            values.push_back(v);
        }
        ++rows;
    }
    Eigen::MatrixXd obs(static_cast<Eigen::Index>(dy), static_cast<Eigen::Index>(rows));
    for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t j = 0; j < dy; ++j)
            obs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = values[t * dy + j];
    return obs;
}

Eigen::MatrixXd read_observations_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::ConfigError, fmt::format("cannot open observation file '{}'", path.string()));
    return read_observations_csv(in);
}

void write_observations_csv(std::ostream& out, const Eigen::MatrixXd& observations)
{
    std::string buf;
    for (Eigen::Index j = 0; j < observations.rows(); ++j) buf += fmt::format("{}y_{}", j ? "," : "", j + 1);
    buf += '\n';
    for (Eigen::Index t = 0; t < observations.cols(); ++t) {
        for (Eigen::Index j = 0; j < observations.rows(); ++j)
            buf += fmt::format("{}{:.17g}", j ? "," : "", observations(j, t));
        buf += '\n';
    }
    out << buf;
}

void write_observations_csv(const std::filesystem::path& path, const Eigen::MatrixXd& observations)
{
    std::ofstream out(path);
    if (!out) fail(Errc::ConfigError, fmt::format("cannot write observation file '{}'", path.string()));
    write_observations_csv(out, observations);
}

}  // namespace smc::models

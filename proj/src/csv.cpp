#include "lsfts/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace lsfts::io {

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        const char* first = line.data() + pos;
        const char* last = line.data() + comma;
        while (first < last && (*first == ' ' || *first == '\t')) ++first;
        while (last > first && (last[-1] == ' ' || last[-1] == '\r' || last[-1] == '\t')) --last;

        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || !std::isfinite(value))
            throw DataError("line " + std::to_string(line_no) + ": cell " +
                            std::to_string(row.size() + 1) + " is not a finite number");
        row.push_back(value);
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    return row;
}

Grid grid_from_row(const std::vector<double>& points, std::size_t line_no) {
    if (points.size() < 2)
        throw DataError("line " + std::to_string(line_no) + ": a grid needs at least 2 points");

    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    const double step = points[1] - points[0];
    for (Eigen::Index i = 1; i < n; ++i) {
        const double d = points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(i - 1)];
        if (!(d > 0.0))
            throw DataError("line " + std::to_string(line_no) +
                            ": grid points must be strictly increasing (violated at column " +
                            std::to_string(i + 1) + ")");
        if (std::abs(d - step) > 1e-8 * std::max(step, 1e-300))
            throw DataError("line " + std::to_string(line_no) +
                            ": grid is not uniformly spaced (column " + std::to_string(i + 1) +
                            "); non-uniform grids are not supported");
    }

    Grid g;
    g.points = Eigen::Map<const Eigen::VectorXd>(points.data(), n);
    g.weights = Eigen::VectorXd::Constant(n, step);
    g.weights(0) = 0.5 * step;
    g.weights(n - 1) = 0.5 * step;
    return g;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw DataError("'" + path + "' is empty");
    return lines;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::string>& lines, Eigen::Index n,
                               std::size_t first_line) {
    const Eigen::Index rows = static_cast<Eigen::Index>(lines.size()) -
                              static_cast<Eigen::Index>(first_line) + 1;
    Eigen::MatrixXd values(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t line_no = first_line + static_cast<std::size_t>(r);
        const std::vector<double> row = parse_row(lines[line_no - 1], line_no);
        if (static_cast<Eigen::Index>(row.size()) != n)
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                            " cells, found " + std::to_string(row.size()));
        values.row(r) = Eigen::Map<const Eigen::VectorXd>(row.data(), n).transpose();
    }
    return values;
}

void write_row(std::FILE* out, const double* data, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i)
        std::fprintf(out, "%s%.17g", i == 0 ? "" : ",", data[i]);
    std::fputc('\n', out);
}

class FileHandle {
public:
    explicit FileHandle(const std::string& path) : f_(std::fopen(path.c_str(), "w")) {
        if (f_ == nullptr) throw DataError("cannot open '" + path + "' for writing");
    }
    ~FileHandle() {
        if (f_ != nullptr) std::fclose(f_);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
    std::FILE* get() const { return f_; }

private:
    std::FILE* f_;
};

} // namespace

FunctionalSeries read_series(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    const Grid grid = grid_from_row(parse_row(lines[0], 1), 1);
    if (lines.size() < 3)
        throw DataError("'" + path + "': a series needs a grid row and at least 2 curve rows");
    return make_series(rows_to_matrix(lines, grid.size(), 2), grid);
}

void write_series(const FunctionalSeries& series, const std::string& path) {
    FileHandle out(path);
    const Eigen::VectorXd points = series.grid.points;
    write_row(out.get(), points.data(), points.size());
    Eigen::VectorXd row(series.grid.size());
    for (Eigen::Index t = 0; t < series.length(); ++t) {
        row = series.values.row(t).transpose();
        write_row(out.get(), row.data(), row.size());
    }
}

Curve read_curve(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    const Grid grid = grid_from_row(parse_row(lines[0], 1), 1);
    if (lines.size() != 2)
        throw DataError("'" + path + "': a curve file needs a grid row and exactly 1 value row");
    const Eigen::MatrixXd values = rows_to_matrix(lines, grid.size(), 2);
    return Curve{values.row(0).transpose(), grid};
}

void write_curve(const Eigen::VectorXd& values, const Grid& grid, const std::string& path) {
    if (values.size() != grid.size())
        throw InvalidArgument("write_curve: curve length does not match the grid");
    FileHandle out(path);
    write_row(out.get(), grid.points.data(), grid.points.size());
    write_row(out.get(), values.data(), values.size());
}

void write_kernel(const LocalCovariance& cov, const std::string& path) {
    FileHandle out(path);
    write_row(out.get(), cov.grid.points.data(), cov.grid.points.size());
    Eigen::VectorXd row(cov.kernel.cols());
    for (Eigen::Index i = 0; i < cov.kernel.rows(); ++i) {
        row = cov.kernel.row(i).transpose();
        write_row(out.get(), row.data(), row.size());
    }
}

void write_eigenvalues(const Eigen::VectorXd& values, const std::string& path) {
    FileHandle out(path);
    for (Eigen::Index i = 0; i < values.size(); ++i)
        std::fprintf(out.get(), "%.17g\n", values(i));
}

void write_eigenfunctions(const EigenSystem& es, const Grid& grid, const std::string& path) {
    FileHandle out(path);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        std::fprintf(out.get(), "%.17g", grid.points(i));
        for (Eigen::Index j = 0; j < es.eigenfunctions.cols(); ++j)
            std::fprintf(out.get(), ",%.17g", es.eigenfunctions(i, j));
        std::fputc('\n', out.get());
    }
}

std::string format_double(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

} // namespace lsfts::io

#include <sglasso/matrix_io.hpp>
#include <sglasso/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sglasso {

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_value(std::string_view tok, std::size_t line)
{
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw InvalidArgument("CSV line " + std::to_string(line) + ": cannot parse value '"
                              + std::string(tok) + "'");
    }
    return v;
}

DenseMatrix parse_rows(std::string_view text)
{
    DenseMatrix m;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = nl == std::string_view::npos ? text : text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        std::size_t count = 0;
        while (true) {
            const auto comma = line.find(',');
            m.values.push_back(parse_value(line.substr(0, comma), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (m.rows == 0) {
            m.cols = count;
        } else if (count != m.cols) {
            throw DimensionMismatch("CSV line " + std::to_string(line_no) + " has " + std::to_string(count)
                                    + " values, expected " + std::to_string(m.cols));
        }
        ++m.rows;
    }
    if (m.rows == 0) throw InvalidArgument("CSV contains no data rows");
    return m;
}

template <class Get>
std::string render(std::size_t rows, std::size_t cols, Get&& get, std::string_view header)
{
    std::string out;
    out.reserve(rows * cols * 12);
    if (!header.empty()) {
        out += "# ";
        out += header;
        out += '\n';
    }
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (j) out += ',';
            out += format_double(get(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace

DenseMatrix parse_dense_csv(std::string_view text)
{
    return parse_rows(text);
}

SymMatrix parse_matrix_csv(std::string_view text)
{
    const DenseMatrix d = parse_rows(text);
    if (d.rows != d.cols) {
        throw DimensionMismatch("matrix CSV is " + std::to_string(d.rows) + "x" + std::to_string(d.cols)
                                + ", expected square");
    }
    return SymMatrix::from_row_major(d.rows, d.values);
}

std::string to_csv(const SymMatrix& m, std::string_view header)
{
    return render(m.dim(), m.dim(), [&](std::size_t i, std::size_t j) { return m(i, j); }, header);
}

std::string to_csv(const DenseMatrix& m, std::string_view header)
{
    return render(m.rows, m.cols, [&](std::size_t i, std::size_t j) { return m(i, j); }, header);
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

SymMatrix read_matrix_csv(const std::filesystem::path& path)
{
    try {
        return parse_matrix_csv(read_text(path));
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_matrix_csv(const std::filesystem::path& path, const SymMatrix& m, std::string_view header)
{
    write_text_atomic(path, to_csv(m, header));
}

void write_dense_csv(const std::filesystem::path& path, const DenseMatrix& m, std::string_view header)
{
    write_text_atomic(path, to_csv(m, header));
}

} // namespace sglasso

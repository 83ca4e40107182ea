#include "qp_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace sscqp {

// ---------------------------------------------------------------------------
// QpProblem

QpProblem::QpProblem(DenseMatrix q, Vector b, double c, DenseMatrix a)
    : q_(std::move(q)), b_(std::move(b)), c_(c), a_(std::move(a)) {
    const std::size_t n = b_.size();
    if (q_.rows() != n || q_.cols() != n) throw Error(ErrorCode::InvalidProblem, "Q must be n x n");
    if (a_.rows() != n || a_.cols() != n) throw Error(ErrorCode::InvalidProblem, "A must be n x n");
    if (!std::isfinite(c_)) throw Error(ErrorCode::InvalidProblem, "c not finite");
    if (!q_.is_symmetric(kSymmetryTolerance)) throw Error(ErrorCode::InvalidProblem, "Q not symmetric");
    try {
        q_chol_ = std::make_shared<const CholeskyFactorization>(CholeskyFactorization::factor(q_));
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidProblem, "Q not positive definite");
    }
    try {
        a_lu_ = std::make_shared<const LuFactorization>(LuFactorization::factor(a_));
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidProblem, "A singular");
    }
}

double QpProblem::objective(const Vector& y) const { return 0.5 * dot(y, q_ * y) + dot(b_, y) + c_; }

// ---------------------------------------------------------------------------
// SemiSmoothSystem

SemiSmoothSystem::SemiSmoothSystem(DenseMatrix m, Vector q) : SemiSmoothSystem(std::move(m), std::move(q), nullptr) {}

SemiSmoothSystem::SemiSmoothSystem(DenseMatrix m, Vector q, std::shared_ptr<const QpProblem> source)
    : m_(std::move(m)), q_(std::move(q)), norm_m_(0.0), source_(std::move(source)) {
    if (m_.rows() != q_.size() || m_.cols() != q_.size()) throw Error(ErrorCode::InvalidArgument, "M must be n x n");
    if (!m_.is_symmetric(kSymmetryTolerance)) throw Error(ErrorCode::InvalidArgument, "M not symmetric");
    try {
        norm_m_ = spectral_norm_symmetric(m_, kNormTolerance);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        // Power iteration stalls when the top two |eigenvalues| nearly tie; singular
        // values of a symmetric matrix are its |eigenvalues|.
        norm_m_ = std::ranges::max(jacobi_svd(m_).sigma.values());
    }
}

SemiSmoothSystem build_system(const QpProblem& p) {
    // AᵀQA = (LᵀA)ᵀ(LᵀA) with Q = LLᵀ; the Gram form is exactly symmetric.
    const DenseMatrix& l = p.q_factor().lower();
    DenseMatrix g = transpose_times(l, p.A());
    DenseMatrix m = transpose_times(g, g);
    for (std::size_t i = 0; i < p.dim(); ++i) m(i, i) -= 1.0;
    Vector q = transpose_times(p.A(), p.b());
    return SemiSmoothSystem(std::move(m), std::move(q), std::make_shared<const QpProblem>(p));
}

Vector residual_F(const SemiSmoothSystem& s, const Vector& x) {
    Vector r = s.M() * plus_part(x);
    r += x;
    r += s.q();
    return r;
}

DenseMatrix jacobian_S(const SemiSmoothSystem& s, const SignPattern& pattern) {
    const std::size_t n = s.dim();
    if (pattern.size() != n) throw Error(ErrorCode::InvalidArgument, "pattern dimension mismatch");
#ifdef SSCQP_FAULT_FLIP_JACOBIAN
    constexpr double sign = -1.0;  // negative-control build only
#else
    constexpr double sign = 1.0;
#endif
    DenseMatrix j = DenseMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (!pattern[c]) continue;
        auto mc = s.M().column(c);
        auto jc = j.column(c);
        for (std::size_t r = 0; r < n; ++r) jc[r] += sign * mc[r];
    }
    return j;
}

QpProblem projection_problem(const DenseMatrix& a, const Vector& z) {
    if (!a.is_square() || a.rows() != z.size()) throw Error(ErrorCode::InvalidArgument, "A must be n x n");
    (void)LuFactorization::factor(a);  // SingularMatrix surfaces here
    DenseMatrix q = transpose_times(a, a);
    Vector b = -transpose_times(a, z);
    return QpProblem(std::move(q), std::move(b), 0.5 * dot(z, z), DenseMatrix::identity(z.size()));
}

Vector recover_qp_solution(const QpProblem& p, const Vector& u) { return p.A() * plus_part(u); }

KktCertificate check_kkt(const QpProblem& p, const Vector& y, double tol) {
    Vector g = p.Q() * y;
    g += p.b();
    KktCertificate cert{};
    cert.primal_feasibility = min_entry(p.a_factor().solve(y));
    cert.dual_feasibility = min_entry(transpose_times(p.A(), g));
    cert.complementarity = std::abs(dot(g, y));
    cert.passed = cert.primal_feasibility >= -tol && cert.dual_feasibility >= -tol &&
                  cert.complementarity <= tol * (1.0 + norm2(y) * norm2(g));
    return cert;
}

double lcp_residual(const QpProblem& p, const Vector& x, const Vector& y) {
    const DenseMatrix& l = p.q_factor().lower();
    DenseMatrix g = transpose_times(l, p.A());
    Vector r = y - transpose_times(g, g * x);
    r -= transpose_times(p.A(), p.b());
    double worst = norm_inf(r);
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, -std::min(x[i], 0.0));
        worst = std::max(worst, -std::min(y[i], 0.0));
    }
    return std::max(worst, std::abs(dot(x, y)));
}

// ---------------------------------------------------------------------------
// Problem files

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kMagic = "sscqp";
constexpr const char* kVersion = "1";
constexpr std::size_t kMaxFileDimension = 20000;

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

/// Non-empty, comment-stripped lines.
std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        ++number;
        std::string_view line(text.data() + start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = tokenize(line);
        if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
        start = end + 1;
    }
    return lines;
}

double parse_real(std::string_view token, std::size_t line) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError(line, "malformed number '" + std::string(token) + "'");
    if (!std::isfinite(v)) throw ParseError(line, "non-finite number '" + std::string(token) + "'");
    return v;
}

class Cursor {
public:
    explicit Cursor(std::vector<Line> lines, std::size_t last_line)
        : lines_(std::move(lines)), last_line_(last_line) {}

    bool done() const { return pos_ == lines_.size(); }
    const Line& peek() const { return lines_[pos_]; }
    const Line& next(const char* expecting) {
        if (done()) throw ParseError(last_line_, std::string("unexpected end of file, expected ") + expecting);
        return lines_[pos_++];
    }
    std::size_t last_line() const { return last_line_; }

private:
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
    std::size_t last_line_;
};

std::vector<double> read_row(Cursor& cur, std::size_t n, const char* what) {
    const Line& line = cur.next(what);
    if (line.tokens.size() != n) {
        throw ParseError(line.number, std::string(what) + ": expected " + std::to_string(n) + " entries, found " +
                                          std::to_string(line.tokens.size()));
    }
    std::vector<double> row;
    row.reserve(n);
    for (auto tok : line.tokens) row.push_back(parse_real(tok, line.number));
    return row;
}

DenseMatrix read_matrix(Cursor& cur, std::size_t n, const char* what) {
    std::vector<double> row_major;
    row_major.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = read_row(cur, n, what);
        row_major.insert(row_major.end(), row.begin(), row.end());
    }
    return DenseMatrix::from_row_major(n, n, row_major);
}

void append_matrix(std::ostringstream& out, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_real(m(i, j));
        }
        out << '\n';
    }
}

void append_vector(std::ostringstream& out, const Vector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_real(v[i]);
    }
    out << '\n';
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    const auto total_lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
    Cursor cur(split_lines(text), total_lines);

    const Line& magic = cur.next("header 'sscqp 1'");
    if (magic.tokens.size() != 2 || magic.tokens[0] != kMagic) throw ParseError(magic.number, "expected header 'sscqp 1'");
    if (magic.tokens[1] != kVersion) {
        throw ParseError(magic.number, "unsupported format version '" + std::string(magic.tokens[1]) + "'");
    }

    const Line& dim = cur.next("'n <dim>'");
    if (dim.tokens.size() != 2 || dim.tokens[0] != "n") throw ParseError(dim.number, "expected 'n <dim>'");
    std::size_t n = 0;
    {
        auto tok = dim.tokens[1];
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || n == 0) {
            throw ParseError(dim.number, "dimension must be a positive integer");
        }
        if (n > kMaxFileDimension) throw ParseError(dim.number, "dimension exceeds " + std::to_string(kMaxFileDimension));
    }

    std::optional<DenseMatrix> q, a;
    std::optional<Vector> b, x0, u;
    std::optional<double> c;
    while (!cur.done()) {
        const Line& header = cur.next("section header");
        if (header.tokens.size() != 1) throw ParseError(header.number, "expected a section header");
        const std::string_view name = header.tokens[0];
        auto duplicate = [&](bool seen) {
            if (seen) throw ParseError(header.number, "duplicate section '" + std::string(name) + "'");
        };
        if (name == "Q") {
            duplicate(q.has_value());
            q = read_matrix(cur, n, "Q row");
        } else if (name == "A") {
            duplicate(a.has_value());
            a = read_matrix(cur, n, "A row");
        } else if (name == "b") {
            duplicate(b.has_value());
            b = Vector(read_row(cur, n, "b"));
        } else if (name == "x0") {
            duplicate(x0.has_value());
            x0 = Vector(read_row(cur, n, "x0"));
        } else if (name == "u") {
            duplicate(u.has_value());
            u = Vector(read_row(cur, n, "u"));
        } else if (name == "c") {
            duplicate(c.has_value());
            c = read_row(cur, 1, "c").front();
        } else {
            throw ParseError(header.number, "unknown section '" + std::string(name) + "'");
        }
    }
    if (!q) throw ParseError(cur.last_line(), "missing section 'Q'");
    if (!a) throw ParseError(cur.last_line(), "missing section 'A'");
    if (!b) throw ParseError(cur.last_line(), "missing section 'b'");
    if (!c) throw ParseError(cur.last_line(), "missing section 'c'");

    return ProblemFile{QpProblem(std::move(*q), std::move(*b), *c, std::move(*a)), std::move(x0), std::move(u), {}};
}

std::string format_problem(const ProblemFile& file) {
    const QpProblem& p = file.problem;
    std::ostringstream out;
    out << kMagic << ' ' << kVersion << '\n';
    for (const auto& comment : file.comments) out << "# " << comment << '\n';
    out << "n " << p.dim() << '\n';
    out << "Q\n";
    append_matrix(out, p.Q());
    out << "A\n";
    append_matrix(out, p.A());
    out << "b\n";
    append_vector(out, p.b());
    out << "c\n" << format_real(p.c()) << '\n';
    if (file.x0) {
        out << "x0\n";
        append_vector(out, *file.x0);
    }
    if (file.u) {
        out << "u\n";
        append_vector(out, *file.u);
    }
    return out.str();
}

ProblemFile read_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

void write_problem(const ProblemFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << format_problem(file);
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace sscqp

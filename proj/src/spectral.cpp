#include "rockwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace rockwave {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid(std::vector<int> dims_, std::vector<double> box_)
    : dims(std::move(dims_)), box(std::move(box_)) {
    if (dims.empty() || dims.size() != box.size())
        throw std::invalid_argument("grid: dims/box rank mismatch");
    for (int n : dims)
        if (!power_of_two(n))
            throw std::invalid_argument("grid: point counts must be powers of two");
    for (double l : box)
        if (!(l > 0.0))
            throw std::invalid_argument("grid: box lengths must be positive");
}

std::size_t Grid::total() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < rank(); ++a) v *= box[a] / dims[a];
    return v;
}

double Grid::volume() const {
    double v = 1.0;
    for (double l : box) v *= l;
    return v;
}

double Grid::coord(int axis, int index) const {
    return -0.5 * box[axis] + box[axis] * static_cast<double>(index) / dims[axis];
}

int Grid::mode(int axis, int index) const {
    const int n = dims[axis];
    return index < n / 2 ? index : index - n;
}

double Grid::freq(int axis, int index) const {
    return 2.0 * M_PI * mode(axis, index) / box[axis];
}

void Grid::unravel(std::size_t flat, std::span<int> idx) const {
    for (int a = rank() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % dims[a]);
        flat /= dims[a];
    }
}

std::vector<double> Grid::symbol_table(const GradedStructure& gs) const {
    if (gs.rank() != rank())
        throw std::invalid_argument("grid: structure rank mismatch");
    std::vector<double> table(total());
    std::vector<int> idx(rank());
    std::vector<double> xi(rank());
    for (std::size_t i = 0; i < table.size(); ++i) {
        unravel(i, idx);
        for (int a = 0; a < rank(); ++a) xi[a] = freq(a, idx[a]);
        table[i] = gs.symbol(xi);
    }
    return table;
}

std::vector<std::uint8_t> Grid::dealias_mask() const {
    std::vector<std::uint8_t> mask(total(), 1);
    std::vector<int> idx(rank());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        unravel(i, idx);
        for (int a = 0; a < rank(); ++a) {
            if (std::abs(mode(a, idx[a])) > dims[a] / 3) {
                mask[i] = 0;
                break;
            }
        }
    }
    return mask;
}

struct Fft::Impl {
    std::size_t n = 0;
    double scale = 1.0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd{}, bwd{};

    explicit Impl(const Grid& g) {
        n = g.total();
        scale = 1.0 / static_cast<double>(n);
        in = fftw_alloc_complex(n);
        out = fftw_alloc_complex(n);
        if (!in || !out) throw std::bad_alloc();
        std::vector<int> dims(g.dims.begin(), g.dims.end());
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft(g.rank(), dims.data(), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(g.rank(), dims.data(), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fft: plan creation failed");
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
};

Fft::Fft(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;

std::vector<cplx> Fft::forward(std::span<const double> field) {
    if (field.size() != impl_->n) throw std::invalid_argument("fft: field size mismatch");
    for (std::size_t i = 0; i < impl_->n; ++i) {
        impl_->in[i][0] = field[i];
        impl_->in[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    std::vector<cplx> coeffs(impl_->n);
    for (std::size_t i = 0; i < impl_->n; ++i)
        coeffs[i] = cplx(impl_->out[i][0], impl_->out[i][1]) * impl_->scale;
    return coeffs;
}

std::vector<cplx> Fft::inverse_complex(std::span<const cplx> coeffs) {
    if (coeffs.size() != impl_->n) throw std::invalid_argument("fft: coefficient size mismatch");
    for (std::size_t i = 0; i < impl_->n; ++i) {
        impl_->in[i][0] = coeffs[i].real();
        impl_->in[i][1] = coeffs[i].imag();
    }
    fftw_execute(impl_->bwd);
    std::vector<cplx> field(impl_->n);
    for (std::size_t i = 0; i < impl_->n; ++i)
        field[i] = cplx(impl_->out[i][0], impl_->out[i][1]);
    return field;
}

std::vector<double> Fft::inverse(std::span<const cplx> coeffs) {
    if (coeffs.size() != impl_->n) throw std::invalid_argument("fft: coefficient size mismatch");
    for (std::size_t i = 0; i < impl_->n; ++i) {
        impl_->in[i][0] = coeffs[i].real();
        impl_->in[i][1] = coeffs[i].imag();
    }
    fftw_execute(impl_->bwd);
    std::vector<double> field(impl_->n);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < impl_->n; ++i) {
        field[i] = impl_->out[i][0];
        max_re = std::max(max_re, std::abs(impl_->out[i][0]));
        max_im = std::max(max_im, std::abs(impl_->out[i][1]));
    }
    if (max_im > 1e-10 * std::max(max_re, 1e-300))
        throw std::runtime_error("fft: inverse produced a non-real field");
    return field;
}

double hermitian_defect(const Grid& g, std::span<const cplx> coeffs) {
    if (coeffs.size() != g.total()) throw std::invalid_argument("hermitian: size mismatch");
    const int r = g.rank();
    std::vector<int> idx(r), conj_idx(r);
    double worst = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        g.unravel(i, idx);
        std::size_t ci = 0;
        for (int a = 0; a < r; ++a) {
            conj_idx[a] = idx[a] == 0 ? 0 : g.dims[a] - idx[a];
            ci = ci * g.dims[a] + conj_idx[a];
        }
        worst = std::max(worst, std::abs(coeffs[i] - std::conj(coeffs[ci])));
    }
    return worst;
}

double sobolev_norm(const Grid& g, const GradedStructure& gs,
                    std::span<const cplx> coeffs, double s, SobolevKind kind) {
    if (coeffs.size() != g.total()) throw std::invalid_argument("norm: size mismatch");
    const auto table = g.symbol_table(gs);
    const double expo = 2.0 * s / gs.hom_degree();
    const double vol = g.volume();

    if (kind == SobolevKind::homogeneous && s < 0.0) {
        double sum_sq = 0.0;
        for (const auto& c : coeffs) sum_sq += std::norm(c);
        if (std::norm(coeffs[0]) > 1e-20 * std::max(sum_sq, 1e-300))
            throw std::domain_error("norm: negative-order homogeneous norm needs a vanishing zero mode");
    }

    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        double w;
        if (kind == SobolevKind::homogeneous) {
            if (table[i] == 0.0) {
                if (s > 0.0) continue;      // multiplier vanishes
                if (s == 0.0) w = 1.0;      // plain L^2
                else continue;              // zero mode verified absent above
            } else {
                w = std::pow(table[i], expo);
            }
        } else {
            w = std::pow(1.0 + table[i], expo);
        }
        acc += w * std::norm(coeffs[i]);
    }
    return std::sqrt(vol * acc);
}

double lp_norm(const Grid& g, std::span<const double> field, double q) {
    if (field.size() != g.total()) throw std::invalid_argument("norm: size mismatch");
    if (!(q >= 1.0)) throw std::invalid_argument("norm: q must be at least 1");
    double acc = 0.0;
    for (double v : field) acc += std::pow(std::abs(v), q);
    return std::pow(acc * g.cell_volume(), 1.0 / q);
}

double gn_ratio(const Grid& g, const GradedStructure& gs,
                std::span<const double> field, double q, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("gn: s must be positive");
    if (!(q >= 2.0)) throw std::invalid_argument("gn: q must be at least 2");
    const double qdim = gs.hom_dimension();
    if (qdim > 2.0 * s) {
        const double qmax = 2.0 * qdim / (qdim - 2.0 * s);
        if (q > qmax) throw std::invalid_argument("gn: q outside the admissible window");
    }
    const double theta = (0.5 - 1.0 / q) * qdim / s;

    Fft fft(g);
    const auto coeffs = fft.forward(field);
    const double l2 = sobolev_norm(g, gs, coeffs, 0.0);
    const double hs = sobolev_norm(g, gs, coeffs, s);
    const double lq = lp_norm(g, field, q);
    const double denom = std::pow(hs, theta) * std::pow(l2, 1.0 - theta);
    if (!(denom > 0.0))
        throw std::domain_error("gn: ratio undefined for the zero field");
    return lq / denom;
}

void write_field(const std::string& path, const Grid& g, std::span<const double> field) {
    if (field.size() != g.total()) throw std::invalid_argument("field io: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("field io: cannot open " + path);
    const char magic[8] = {'R', 'W', 'F', 'L', 'D', '0', '0', '1'};
    out.write(magic, 8);
    const std::int32_t r = g.rank();
    out.write(reinterpret_cast<const char*>(&r), sizeof r);
    for (int d : g.dims) {
        const std::int64_t v = d;
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    for (double l : g.box)
        out.write(reinterpret_cast<const char*>(&l), sizeof l);
    out.write(reinterpret_cast<const char*>(field.data()),
              static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!out) throw std::runtime_error("field io: write failed for " + path);
}

std::pair<Grid, std::vector<double>> read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("field io: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "RWFLD001", 8) != 0)
        throw std::runtime_error("field io: bad magic in " + path);
    std::int32_t r = 0;
    in.read(reinterpret_cast<char*>(&r), sizeof r);
    if (!in || r < 1 || r > 8) throw std::runtime_error("field io: bad rank in " + path);
    std::vector<int> dims(r);
    std::vector<double> box(r);
    for (auto& d : dims) {
        std::int64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        d = static_cast<int>(v);
    }
    for (auto& l : box)
        in.read(reinterpret_cast<char*>(&l), sizeof l);
    Grid g(dims, box);
    std::vector<double> field(g.total());
    in.read(reinterpret_cast<char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!in) throw std::runtime_error("field io: truncated payload in " + path);
    return {std::move(g), std::move(field)};
}

} // namespace rockwave

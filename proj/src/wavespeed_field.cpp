#include "tent/wavespeed_field.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "tent/errors.hpp"

namespace tent {

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::constant: return "constant";
        case FieldKind::timestep: return "timestep";
        case FieldKind::cone: return "cone";
        case FieldKind::band: return "band";
        case FieldKind::table: return "table";
        case FieldKind::composite: return "composite";
    }
    return "unknown";
}

namespace {

EventPoint lerp(const EventPoint& a, const EventPoint& b, double s) {
    return {a.position + s * (b.position - a.position), a.time + s * (b.time - a.time)};
}

EventPoint barycentric(const SpacetimeSimplex& t, double l1, double l2) {
    const auto& a = t.points[0];
    const auto& b = t.points[1];
    const auto& c = t.points[2];
    return {a.position + l1 * (b.position - a.position) + l2 * (c.position - a.position),
            a.time + l1 * (b.time - a.time) + l2 * (c.time - a.time)};
}

template <class F>
void edge_level_crossings(const SpacetimeSimplex& s, F&& f, double level, std::vector<EventPoint>& out) {
    for (int i = 0; i < s.count; ++i)
        for (int j = i + 1; j < s.count; ++j) {
            double fa = f(s.points[i]) - level;
            double fb = f(s.points[j]) - level;
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) out.push_back(lerp(s.points[i], s.points[j], fa / (fa - fb)));
        }
}

// Point of a spacetime triangle where two affine functions take given levels.
template <class F, class G>
void triangle_level_pair(const SpacetimeSimplex& s, F&& f, double cf, G&& g, double cg, std::vector<EventPoint>& out) {
    if (s.count != 3) return;
    double f0 = f(s.points[0]), g0 = g(s.points[0]);
    double a11 = f(s.points[1]) - f0, a12 = f(s.points[2]) - f0;
    double a21 = g(s.points[1]) - g0, a22 = g(s.points[2]) - g0;
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300) return;
    double r1 = cf - f0, r2 = cg - g0;
    double l1 = (r1 * a22 - a12 * r2) / det;
    double l2 = (a11 * r2 - a21 * r1) / det;
    if (l1 >= 0.0 && l2 >= 0.0 && l1 + l2 <= 1.0) out.push_back(barycentric(s, l1, l2));
}

}  // namespace

// ---------------------------------------------------------------------------

double SlopeField::slope_at(const EventPoint& p, SimplexId element) const {
    if (!std::isfinite(p.time) || p.time < -1e-12 * std::max(1.0, std::abs(p.time)))
        throw OutOfDomain("event time before the initial front");
    if (domain_) {
        auto [lo, hi] = *domain_;
        double tol = 1e-9 * std::max(1.0, norm(hi - lo));
        if (p.position.x < lo.x - tol || p.position.x > hi.x + tol || p.position.y < lo.y - tol ||
            p.position.y > hi.y + tol)
            throw OutOfDomain("event outside the space domain");
    }
    return evaluate(p, element);
}

void SlopeField::critical_points(const SpacetimeSimplex&, std::vector<EventPoint>&) const {}

void SlopeField::set_conservatism(double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw InvalidArgument("conservatism factor must lie in (0, 1]");
    kappa_ = kappa;
}

void SlopeField::set_domain(SpacePoint lo, SpacePoint hi) { domain_ = std::make_pair(lo, hi); }

void SlopeField::set_bounds(double lo, double hi) {
    if (!(lo > 0.0) || !std::isfinite(hi) || lo > hi) throw InvalidArgument("slopes must satisfy 0 < min <= max < inf");
    sigma_min_ = lo;
    sigma_max_ = hi;
}

// ---------------------------------------------------------------------------

ConstantField::ConstantField(double sigma) : sigma_(sigma) { set_bounds(sigma, sigma); }

TimeStepField::TimeStepField(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (values_.size() != breaks_.size() + 1) throw InvalidArgument("time-step field needs one more value than breaks");
    if (!std::is_sorted(breaks_.begin(), breaks_.end())) throw InvalidArgument("time-step breaks must ascend");
    auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    set_bounds(*lo, *hi);
}

double TimeStepField::evaluate(const EventPoint& p, SimplexId) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), p.time);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

void TimeStepField::critical_points(const SpacetimeSimplex& s, std::vector<EventPoint>& out) const {
    for (double b : breaks_) edge_level_crossings(s, [](const EventPoint& e) { return e.time; }, b, out);
}

ConeField::ConeField(SpacePoint center, double t_apex, double sigma_inside, double sigma_outside, double cone_slope)
    : center_(center), t_apex_(t_apex), sigma_in_(sigma_inside), sigma_out_(sigma_outside), cone_slope_(cone_slope) {
    if (!(cone_slope > 0.0)) throw InvalidArgument("cone slope must be positive");
    set_bounds(std::min(sigma_inside, sigma_outside), std::max(sigma_inside, sigma_outside));
}

bool ConeField::inside(const EventPoint& p) const {
    return p.time - t_apex_ >= cone_slope_ * distance(p.position, center_);
}

double ConeField::evaluate(const EventPoint& p, SimplexId) const { return inside(p) ? sigma_in_ : sigma_out_; }

void ConeField::critical_points(const SpacetimeSimplex& s, std::vector<EventPoint>& out) const {
    // The membership margin t - cs |x - c| is concave, so its maximum over the
    // simplex sits at a vertex, an edge stationary point or the apex line.
    for (int i = 0; i < s.count; ++i)
        for (int j = i + 1; j < s.count; ++j) {
            const EventPoint& a = s.points[i];
            const EventPoint& b = s.points[j];
            SpacePoint d = b.position - a.position;
            double len = norm(d);
            if (len == 0.0) continue;
            SpacePoint dir = (1.0 / len) * d;
            double c0 = dot(center_ - a.position, dir);
            double perp = std::abs(cross(dir, center_ - a.position));
            double k = (b.time - a.time) / len / cone_slope_;
            if (std::abs(k) >= 1.0) continue;
            double z = c0 + k * perp / std::sqrt(1.0 - k * k);
            z = std::clamp(z, 0.0, len);
            out.push_back(lerp(a, b, z / len));
        }
    if (s.count == 3) {
        auto fx = [](const EventPoint& e) { return e.position.x; };
        auto fy = [](const EventPoint& e) { return e.position.y; };
        triangle_level_pair(s, fx, center_.x, fy, center_.y, out);
    }
}

BandField::BandField(double a, double b, double halfwidth, double sigma_band, double sigma_outside,
                     std::optional<std::pair<double, double>> after)
    : a_(a), b_(b), halfwidth_(halfwidth), sigma_band_(sigma_band), sigma_out_(sigma_outside), after_(after) {
    if (!(halfwidth > 0.0)) throw InvalidArgument("band half-width must be positive");
    double lo = std::min(sigma_band, sigma_outside), hi = std::max(sigma_band, sigma_outside);
    if (after_) lo = std::min(lo, after_->second), hi = std::max(hi, after_->second);
    set_bounds(lo, hi);
}

bool BandField::in_band(const EventPoint& p) const {
    return std::abs(p.time - (a_ * p.position.x + b_)) <= halfwidth_;
}

double BandField::evaluate(const EventPoint& p, SimplexId) const {
    if (after_ && p.time >= after_->first) return after_->second;
    return in_band(p) ? sigma_band_ : sigma_out_;
}

void BandField::critical_points(const SpacetimeSimplex& s, std::vector<EventPoint>& out) const {
    auto g = [this](const EventPoint& e) { return e.time - a_ * e.position.x - b_; };
    auto t = [](const EventPoint& e) { return e.time; };
    for (double level : {-halfwidth_, halfwidth_}) edge_level_crossings(s, g, level, out);
    if (after_) {
        edge_level_crossings(s, t, after_->first, out);
        for (double level : {-halfwidth_, halfwidth_}) triangle_level_pair(s, g, level, t, after_->first, out);
    }
}

TableField::TableField(std::shared_ptr<const SpaceMesh> mesh, std::vector<double> base, std::vector<ScriptRow> script)
    : mesh_(std::move(mesh)), base_(std::move(base)), script_(std::move(script)) {
    if (static_cast<int>(base_.size()) != mesh_->simplex_count())
        throw InvalidArgument("table field needs one slope per space element");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : base_) lo = std::min(lo, v), hi = std::max(hi, v);
    for (const auto& row : script_) {
        if (row.element < 0 || row.element >= mesh_->simplex_count()) throw InvalidArgument("script names unknown element");
        lo = std::min(lo, row.sigma), hi = std::max(hi, row.sigma);
    }
    std::stable_sort(script_.begin(), script_.end(), [](const ScriptRow& a, const ScriptRow& b) {
        return a.element != b.element ? a.element < b.element : a.trigger < b.trigger;
    });
    set_bounds(lo, hi);
    current_ = base_;
}

double TableField::element_slope(SimplexId element, double time) const {
    double sigma = base_.at(element);
    auto first = std::lower_bound(script_.begin(), script_.end(), element,
                                  [](const ScriptRow& r, SimplexId e) { return r.element < e; });
    for (auto it = first; it != script_.end() && it->element == element && it->trigger <= time; ++it) sigma = it->sigma;
    return sigma;
}

double TableField::evaluate(const EventPoint& p, SimplexId element) const {
    if (element >= 0) return element_slope(element, p.time);
    double best = std::numeric_limits<double>::infinity();
    const double tol = 1e-12;
    for (SimplexId s = 0; s < mesh_->simplex_count(); ++s) {
        auto vs = mesh_->simplex_span(s);
        bool contains = false;
        if (mesh_->dim() == 1) {
            double a = mesh_->vertex(vs[0]).x, b = mesh_->vertex(vs[1]).x;
            double slack = tol * std::max(1.0, std::abs(b - a));
            contains = p.position.x >= std::min(a, b) - slack && p.position.x <= std::max(a, b) + slack;
        } else {
            SpacePoint a = mesh_->vertex(vs[0]), b = mesh_->vertex(vs[1]), c = mesh_->vertex(vs[2]);
            double area2 = cross(b - a, c - a);
            double l0 = cross(b - p.position, c - p.position) / area2;
            double l1 = cross(c - p.position, a - p.position) / area2;
            contains = l0 >= -1e-10 && l1 >= -1e-10 && 1.0 - l0 - l1 >= -1e-10;
        }
        if (contains) best = std::min(best, element_slope(s, p.time));
    }
    if (!std::isfinite(best)) throw OutOfDomain("event outside every space element");
    return best;
}

void TableField::critical_points(const SpacetimeSimplex& s, std::vector<EventPoint>& out) const {
    for (const auto& row : script_) edge_level_crossings(s, [](const EventPoint& e) { return e.time; }, row.trigger, out);
}

bool TableField::record_solved(SimplexId element, double time) {
    double now = element_slope(element, time);
    if (now == current_.at(element)) return false;
    current_[element] = now;
    return true;
}

CompositeField::CompositeField(std::vector<std::shared_ptr<SlopeField>> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidArgument("composite field needs at least one part");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& f : parts_) lo = std::min(lo, f->sigma_min()), hi = std::max(hi, f->sigma_max());
    set_bounds(lo, hi);
}

double CompositeField::evaluate(const EventPoint& p, SimplexId element) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : parts_) best = std::min(best, f->slope_at(p, element));
    return best;
}

void CompositeField::critical_points(const SpacetimeSimplex& s, std::vector<EventPoint>& out) const {
    for (const auto& f : parts_) f->critical_points(s, out);
}

// ---------------------------------------------------------------------------

std::vector<EventPoint> slope_sample_points(const SlopeField& field, const SpacetimeSimplex& s, int samples) {
    std::vector<EventPoint> pts(s.points.begin(), s.points.begin() + s.count);
    for (int i = 0; i < s.count; ++i)
        for (int j = i + 1; j < s.count; ++j) pts.push_back(lerp(s.points[i], s.points[j], 0.5));
    if (s.count >= 3) {
        EventPoint c{};
        for (int i = 0; i < s.count; ++i) {
            c.position = c.position + (1.0 / s.count) * s.points[i].position;
            c.time += s.points[i].time / s.count;
        }
        pts.push_back(c);
    }
    // Additive-recurrence (R2) low-discrepancy points, folded into the simplex.
    for (int k = 1; k <= samples; ++k) {
        double u = std::fmod(0.5 + k * 0.7548776662466927, 1.0);
        double v = std::fmod(0.5 + k * 0.5698402909980532, 1.0);
        if (s.count == 2) {
            pts.push_back(lerp(s.points[0], s.points[1], u));
        } else if (s.count == 3) {
            if (u + v > 1.0) u = 1.0 - u, v = 1.0 - v;
            pts.push_back(barycentric(s, u, v));
        }
    }
    field.critical_points(s, pts);
    return pts;
}

SimplexSlope min_slope_over(const SlopeField& field, const SpacetimeSimplex& simplex, int samples, SimplexId element) {
    if (simplex.count < 1) throw InvalidArgument("empty spacetime simplex");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : slope_sample_points(field, simplex, samples)) best = std::min(best, field.slope_at(p, element));
    double value = std::clamp(best * field.conservatism(), field.sigma_min(), field.sigma_max());
    return {simplex, value};
}

MonotonicityReport check_cone_monotonicity(const SlopeField& field, int probes, SpacePoint lo, SpacePoint hi,
                                           double horizon, std::uint64_t seed) {
    MonotonicityReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool planar = hi.y > lo.y;
    const double reach = 0.25 * std::max(norm(hi - lo), 1e-12);
    auto in_box = [&](SpacePoint x) { return x.x >= lo.x && x.x <= hi.x && x.y >= lo.y && x.y <= hi.y; };
    for (int i = 0; i < probes; ++i) {
        EventPoint q{{lo.x + unit(rng) * (hi.x - lo.x), planar ? lo.y + unit(rng) * (hi.y - lo.y) : lo.y},
                     unit(rng) * horizon};
        double sq = field.slope_at(q);
        SpacePoint x = q.position;
        double d = 0.0;
        for (int attempt = 0; attempt < 10; ++attempt) {
            double len = unit(rng) * reach;
            double ang = unit(rng) * 2.0 * 3.141592653589793;
            SpacePoint cand = planar ? q.position + len * SpacePoint{std::cos(ang), std::sin(ang)}
                                     : q.position + SpacePoint{ang < 3.141592653589793 ? len : -len, 0.0};
            if (in_box(cand)) {
                x = cand;
                d = len;
                break;
            }
        }
        EventPoint p{x, q.time + sq * d + unit(rng) * 0.25 * horizon};
        double sp = field.slope_at(p);
        ++rep.probes;
        if (sp < sq) {
            ++rep.violations;
            if (!rep.first) rep.first = std::make_pair(q, p);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line.substr(0, line.find('#')));
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

double number(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad number '" + tok + "'", line);
    }
}

double positive(const std::string& tok, int line) {
    double v = number(tok, line);
    if (!(v > 0.0)) throw ValidationError("slope must be positive", line);
    return v;
}

std::vector<double> load_table(const std::string& path, int element_count) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open table file '" + path + "'");
    std::vector<double> values(element_count, std::numeric_limits<double>::quiet_NaN());
    std::optional<double> fallback;
    std::string text;
    int lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        auto tok = tokens_of(text);
        if (tok.empty()) continue;
        if (tok.size() != 2) throw ValidationError(path + ": expected '<element> <slope>'", lineno);
        double sigma = positive(tok[1], lineno);
        if (tok[0] == "default") {
            fallback = sigma;
            continue;
        }
        double id = number(tok[0], lineno);
        if (id != std::floor(id) || id < 0 || id >= element_count)
            throw ValidationError(path + ": unknown element '" + tok[0] + "'", lineno);
        values[static_cast<int>(id)] = sigma;
    }
    for (int e = 0; e < element_count; ++e) {
        if (std::isnan(values[e])) {
            if (!fallback) throw ValidationError(path + ": no slope for element " + std::to_string(e));
            values[e] = *fallback;
        }
    }
    return values;
}

}  // namespace

std::vector<ScriptRow> load_script(std::istream& in) {
    std::vector<ScriptRow> rows;
    std::string text;
    int lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        auto tok = tokens_of(text);
        if (tok.empty()) continue;
        if (tok.size() != 3) throw ValidationError("expected '<element> <trigger time> <slope>'", lineno);
        double id = number(tok[0], lineno);
        if (id != std::floor(id) || id < 0) throw ValidationError("bad element id '" + tok[0] + "'", lineno);
        rows.push_back({static_cast<SimplexId>(id), number(tok[1], lineno), positive(tok[2], lineno)});
    }
    return rows;
}

std::shared_ptr<SlopeField> load_field(std::istream& in, std::shared_ptr<const SpaceMesh> mesh,
                                       const std::string& base_dir) {
    namespace fs = std::filesystem;
    std::vector<std::shared_ptr<SlopeField>> parts;
    std::optional<double> kappa;
    const int dim = mesh->dim();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string(); };
    std::string text;
    int lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        auto tok = tokens_of(text);
        if (tok.empty()) continue;
        if (tok[0] == "kappa") {
            if (tok.size() != 2) throw ValidationError("expected 'kappa <value>'", lineno);
            kappa = number(tok[1], lineno);
            if (!(*kappa > 0.0 && *kappa <= 1.0)) throw ValidationError("kappa must lie in (0, 1]", lineno);
            continue;
        }
        if (tok[0] != "field" || tok.size() < 2) throw ValidationError("expected 'field <kind> ...'", lineno);
        const std::string& kind = tok[1];
        const std::size_t nargs = tok.size() - 2;
        auto arg = [&](std::size_t i) { return number(tok[2 + i], lineno); };
        auto slope = [&](std::size_t i) { return positive(tok[2 + i], lineno); };
        try {
            if (kind == "constant") {
                if (nargs != 1) throw ValidationError("expected 'field constant <sigma>'", lineno);
                parts.push_back(std::make_shared<ConstantField>(slope(0)));
            } else if (kind == "timestep") {
                if (nargs < 3 || nargs % 2 == 0)
                    throw ValidationError("expected 'field timestep <t1> <sigma_before> <sigma_after> [<t2> <sigma2> ...]'", lineno);
                std::vector<double> breaks{arg(0)};
                std::vector<double> values{slope(1), slope(2)};
                for (std::size_t i = 3; i + 1 < nargs + 1; i += 2) breaks.push_back(arg(i)), values.push_back(slope(i + 1));
                if (!std::is_sorted(breaks.begin(), breaks.end()))
                    throw ValidationError("time-step breaks must ascend", lineno);
                parts.push_back(std::make_shared<TimeStepField>(breaks, values));
            } else if (kind == "cone") {
                const std::size_t want = dim == 1 ? 5 : 6;
                if (nargs != want)
                    throw ValidationError(dim == 1 ? "expected 'field cone <cx> <t_apex> <sigma_in> <sigma_out> <cone_slope>'"
                                                   : "expected 'field cone <cx> <cy> <t_apex> <sigma_in> <sigma_out> <cone_slope>'",
                                          lineno);
                std::size_t k = dim == 1 ? 1 : 2;
                SpacePoint c{arg(0), dim == 2 ? arg(1) : 0.0};
                parts.push_back(std::make_shared<ConeField>(c, arg(k), slope(k + 1), slope(k + 2), slope(k + 3)));
            } else if (kind == "band") {
                if (nargs != 5 && nargs != 7)
                    throw ValidationError("expected 'field band <a> <b> <halfwidth> <sigma_band> <sigma_out> [<t_after> <sigma_after>]'", lineno);
                std::optional<std::pair<double, double>> after;
                if (nargs == 7) after = std::make_pair(arg(5), slope(6));
                parts.push_back(std::make_shared<BandField>(arg(0), arg(1), positive(tok[4], lineno), slope(3), slope(4), after));
            } else if (kind == "table") {
                if (nargs != 1 && nargs != 2) throw ValidationError("expected 'field table <path> [<script>]'", lineno);
                auto base = load_table(resolve(tok[2]), mesh->simplex_count());
                std::vector<ScriptRow> script;
                if (nargs == 2) {
                    std::ifstream sin(resolve(tok[3]));
                    if (!sin) throw ValidationError("cannot open script file '" + tok[3] + "'", lineno);
                    script = load_script(sin);
                }
                parts.push_back(std::make_shared<TableField>(mesh, std::move(base), std::move(script)));
            } else {
                throw ValidationError("unknown field kind '" + kind + "'", lineno);
            }
        } catch (const InvalidArgument& e) {
            throw ValidationError(e.what(), lineno);
        }
    }
    if (parts.empty()) throw ValidationError("field document has no 'field' line");
    std::shared_ptr<SlopeField> field = parts.size() == 1 ? parts.front() : std::make_shared<CompositeField>(parts);
    if (kappa) field->set_conservatism(*kappa);
    field->set_domain(mesh->bbox_min(), mesh->bbox_max());
    return field;
}

std::shared_ptr<SlopeField> load_field_file(const std::string& path, std::shared_ptr<const SpaceMesh> mesh) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open field file '" + path + "'");
    auto dir = std::filesystem::path(path).parent_path().string();
    return load_field(in, std::move(mesh), dir.empty() ? "." : dir);
}

}  // namespace tent

namespace tent {

ClampedField::ClampedField(std::shared_ptr<SlopeField> inner, double cap) : inner_(std::move(inner)), cap_(cap) {
    if (!(cap > 0.0)) throw InvalidArgument("slope cap must be positive");
    set_bounds(std::min(inner_->sigma_min(), cap), std::min(inner_->sigma_max(), cap));
    set_conservatism(inner_->conservatism());
}

double ClampedField::evaluate(const EventPoint& p, SimplexId element) const {
    return std::min(inner_->slope_at(p, element), cap_);
}

}  // namespace tent

#include "cylshear/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cylshear/io.hpp"
#include "cylshear/parallel.hpp"

#ifndef CYLSHEAR_DATA_DIR
#define CYLSHEAR_DATA_DIR "data"
#endif

namespace cylsh {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<double, 3> triple(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(where + ": '" + key + "' must be a list of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

IntensityLaw law_from_json(const json& j, const std::string& where) {
  const auto type = j.at("type").get<std::string>();
  IntensityLaw law;
  if (type == "constant") {
    io::require_known_keys(j, {"type", "value"}, where);
    law.kind = LawKind::Constant;
    law.a = j.at("value").get<double>();
  } else if (type == "linear") {
    io::require_known_keys(j, {"type", "a", "b"}, where);
    law.kind = LawKind::Linear;
    law.a = j.at("a").get<double>();
    law.b = j.at("b").get<double>();
  } else if (type == "sinusoid") {
    io::require_known_keys(j, {"type", "a", "b", "phase"}, where);
    law.kind = LawKind::Sinusoid;
    law.a = j.at("a").get<double>();
    law.b = j.at("b").get<double>();
    law.phase = j.value("phase", 0.0);
  } else {
    throw ConfigError(where + ": unknown intensity law '" + type + "'");
  }
  return law;
}

json law_to_json(const IntensityLaw& law) {
  switch (law.kind) {
    case LawKind::Constant:
      return {{"type", "constant"}, {"value", law.a}};
    case LawKind::Linear:
      return {{"type", "linear"}, {"a", law.a}, {"b", law.b}};
    case LawKind::Sinusoid:
      break;
  }
  return {{"type", "sinusoid"}, {"a", law.a}, {"b", law.b}, {"phase", law.phase}};
}

template <class F>
void wrap_json_errors(const std::string& where, F&& body) {
  try {
    body();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

double window_c2(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double s = 1.0 - x * x;
  return s * s * s;
}

}  // namespace

double voxel_center(std::size_t i, std::size_t n) {
  return -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
}

double IntensityLaw::operator()(double omega) const {
  switch (kind) {
    case LawKind::Constant:
      return a;
    case LawKind::Linear:
      return a + b * omega;
    case LawKind::Sinusoid:
      break;
  }
  return a + b * std::sin(omega + phase);
}

bool Ellipsoid::contains(double x1, double x2, double x3) const {
  const double p[3] = {x1 - center[0], x2 - center[1], x3 - center[2]};
  const double ca = std::cos(rotation[0]), sa = std::sin(rotation[0]);
  const double cb = std::cos(rotation[1]), sb = std::sin(rotation[1]);
  const double cc = std::cos(rotation[2]), sc = std::sin(rotation[2]);
  // R = Rz(a) Ry(b) Rx(c); body coordinates are R^T p.
  const double r[3][3] = {{ca * cb, ca * sb * sc - sa * cc, ca * sb * cc + sa * sc},
                          {sa * cb, sa * sb * sc + ca * cc, sa * sb * cc - ca * sc},
                          {-sb, cb * sc, cb * cc}};
  double q = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double b = r[0][k] * p[0] + r[1][k] * p[1] + r[2][k] * p[2];
    const double u = b / semi_axes[static_cast<std::size_t>(k)];
    q += u * u;
  }
  return q <= 1.0;
}

PhantomSpec phantom_from_json(const json& j) {
  PhantomSpec spec;
  wrap_json_errors("phantom spec", [&] {
    io::require_known_keys(j, {"ellipsoids", "description"}, "phantom spec");
    std::size_t k = 0;
    for (const auto& e : j.at("ellipsoids")) {
      const std::string where = "phantom ellipsoid " + std::to_string(k++);
      io::require_known_keys(e, {"center", "semi_axes", "rotation", "law"}, where);
      Ellipsoid el;
      el.center = triple(e, "center", where);
      el.semi_axes = triple(e, "semi_axes", where);
      if (e.contains("rotation")) el.rotation = triple(e, "rotation", where);
      for (double s : el.semi_axes)
        if (!(s > 0.0)) throw ConfigError(where + ": semi-axes must be positive");
      el.law = law_from_json(e.at("law"), where);
      spec.push_back(el);
    }
  });
  return spec;
}

json phantom_to_json(const PhantomSpec& spec) {
  json list = json::array();
  for (const auto& e : spec) {
    list.push_back({{"center", e.center}, {"semi_axes", e.semi_axes}, {"rotation", e.rotation},
                    {"law", law_to_json(e.law)}});
  }
  return {{"ellipsoids", list}};
}

PhantomSpec load_phantom(const std::filesystem::path& path) { return phantom_from_json(io::read_json(path)); }

PhantomSpec default_phantom() {
  return load_phantom(std::filesystem::path(CYLSHEAR_DATA_DIR) / "default_phantom.json");
}

Volume3 render_phantom(const PhantomSpec& spec, std::size_t n1, std::size_t n2, std::size_t n3, double omega) {
  Volume3 out(n1, n2, n3);
  std::vector<double> value(spec.size());
  for (std::size_t e = 0; e < spec.size(); ++e) value[e] = spec[e].law(omega);
  parallel_for(n3, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i3 = begin; i3 < end; ++i3) {
      const double x3 = voxel_center(i3, n3);
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const double x2 = voxel_center(i2, n2);
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
          const double x1 = voxel_center(i1, n1);
          double v = 0.0;
          for (std::size_t e = 0; e < spec.size(); ++e)
            if (spec[e].contains(x1, x2, x3)) v = value[e];
          out.at(i1, i2, i3) = std::clamp(v, 0.0, 1.0);
        }
      }
    }
  });
  return out;
}

Volume3 render_phantom_averaged(const PhantomSpec& spec, std::size_t n1, std::size_t n2, std::size_t n3, double omega,
                                std::size_t factor) {
  if (factor < 1) throw ConfigError("render: supersampling factor must be >= 1");
  if (factor == 1) return render_phantom(spec, n1, n2, n3, omega);
  const auto fine = render_phantom(spec, factor * n1, factor * n2, factor * n3, omega);
  const double scale = 1.0 / static_cast<double>(factor * factor * factor);
  Volume3 out(n1, n2, n3);
  parallel_for(n3, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i3 = begin; i3 < end; ++i3)
      for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
          double sum = 0.0;
          for (std::size_t c = 0; c < factor; ++c)
            for (std::size_t b = 0; b < factor; ++b)
              for (std::size_t a = 0; a < factor; ++a)
                sum += fine.at(factor * i1 + a, factor * i2 + b, factor * i3 + c);
          out.at(i1, i2, i3) = sum * scale;
        }
  });
  return out;
}

OmegaSchedule build_omega_schedule(std::size_t frames, std::size_t stages) {
  if (frames < 1) throw ConfigError("omega schedule: frame count must be >= 1");
  if (stages < 1 || stages % 2 == 0) throw ConfigError("omega schedule: stage count must be odd");
  OmegaSchedule s{frames, stages, {}};
  const double width = kTwoPi / static_cast<double>(2 * frames - 1);
  for (std::size_t t = 0; t < frames; ++t) {
    const double start = static_cast<double>(2 * t) * width;
    std::vector<double> row(stages);
    for (std::size_t k = 0; k < stages; ++k) {
      row[k] = stages == 1 ? start + 0.5 * width
                           : start + width * static_cast<double>(k) / static_cast<double>(stages - 1);
    }
    s.omega.push_back(std::move(row));
  }
  return s;
}

Volume4 render_truth(const PhantomSpec& spec, const GridDims& dims, const OmegaSchedule& schedule,
                     std::size_t supersample) {
  if (schedule.frames != dims.n4) {
    throw DimensionError("render_truth: schedule has " + std::to_string(schedule.frames) + " frames, grid has " +
                         std::to_string(dims.n4));
  }
  Volume4 out(dims);
  for (std::size_t t = 0; t < dims.n4; ++t) {
    const auto frame =
        render_phantom_averaged(spec, dims.n1, dims.n2, dims.n3, schedule.truth_omega(t), supersample);
    std::copy(frame.data.begin(), frame.data.end(), out.frame(t).begin());
  }
  return out;
}

double TrigPoly::operator()(double x1, double x2, double x3) const {
  double v = constant;
  for (const auto& t : terms) {
    const double arg = std::numbers::pi * (t.freq[0] * x1 + t.freq[1] * x2 + t.freq[2] * x3) + t.phase;
    v += t.amplitude * std::cos(arg);
  }
  if (windowed) v *= window_c2(x1) * window_c2(x2) * window_c2(x3);
  return v;
}

double TemporalBump::operator()(double t) const { return base + amplitude * window_c2((t - center) / width); }

bool CartoonSpec::inside(double x1, double x2, double x3) const {
  const double u1 = (x1 - center[0]) / semi_axes[0];
  const double u2 = (x2 - center[1]) / semi_axes[1];
  const double u3 = (x3 - center[2]) / semi_axes[2];
  return u1 * u1 + u2 * u2 + u3 * u3 <= 1.0;
}

CartoonSpec default_cartoon() {
  CartoonSpec c;
  c.center = {0.05, -0.03, 0.02};
  c.semi_axes = {0.5, 0.5, 0.5};
  c.h0.constant = 0.3;
  c.h0.terms = {{0.1, {1, 0, 0}, 0.0}, {0.05, {0, 1, 1}, 0.5}};
  c.h1.constant = 0.5;
  c.h1.terms = {{0.1, {0, 1, 0}, 0.0}, {0.05, {1, 0, 1}, 1.0}};
  c.g0 = {1.0, 0.0, 0.5, 0.5};
  c.g1 = {0.6, 0.4, 0.5, 0.5};
  return c;
}

CartoonSpec smooth_cartoon() {
  CartoonSpec c = default_cartoon();
  c.h1 = TrigPoly{};
  return c;
}

CartoonSpec cartoon_from_json(const json& j) {
  CartoonSpec c;
  wrap_json_errors("cartoon spec", [&] {
    io::require_known_keys(j, {"center", "semi_axes", "h0", "h1", "g0", "g1", "description"}, "cartoon spec");
    if (j.contains("center")) c.center = triple(j, "center", "cartoon spec");
    if (j.contains("semi_axes")) c.semi_axes = triple(j, "semi_axes", "cartoon spec");
    auto poly = [&](const char* key, TrigPoly& p) {
      if (!j.contains(key)) return;
      const auto& h = j.at(key);
      const std::string where = std::string("cartoon ") + key;
      io::require_known_keys(h, {"constant", "terms", "windowed"}, where);
      p = TrigPoly{};
      p.constant = h.value("constant", 0.0);
      p.windowed = h.value("windowed", true);
      for (const auto& t : h.value("terms", json::array())) {
        io::require_known_keys(t, {"amplitude", "freq", "phase"}, where + " term");
        TrigPoly::Term term;
        term.amplitude = t.at("amplitude").get<double>();
        term.freq = t.at("freq").get<std::array<int, 3>>();
        term.phase = t.value("phase", 0.0);
        p.terms.push_back(term);
      }
    };
    auto bump = [&](const char* key, TemporalBump& g) {
      if (!j.contains(key)) return;
      const auto& b = j.at(key);
      io::require_known_keys(b, {"base", "amplitude", "center", "width"}, std::string("cartoon ") + key);
      g.base = b.value("base", 1.0);
      g.amplitude = b.value("amplitude", 0.0);
      g.center = b.value("center", 0.5);
      g.width = b.value("width", 0.5);
      if (!(g.width > 0.0)) throw ConfigError(std::string("cartoon ") + key + ": width must be positive");
    };
    poly("h0", c.h0);
    poly("h1", c.h1);
    bump("g0", c.g0);
    bump("g1", c.g1);
  });
  for (double s : c.semi_axes)
    if (!(s > 0.0)) throw ConfigError("cartoon spec: semi-axes must be positive");
  return c;
}

json cartoon_to_json(const CartoonSpec& c) {
  auto poly = [](const TrigPoly& p) {
    json terms = json::array();
    for (const auto& t : p.terms) terms.push_back({{"amplitude", t.amplitude}, {"freq", t.freq}, {"phase", t.phase}});
    return json{{"constant", p.constant}, {"terms", terms}, {"windowed", p.windowed}};
  };
  auto bump = [](const TemporalBump& g) {
    return json{{"base", g.base}, {"amplitude", g.amplitude}, {"center", g.center}, {"width", g.width}};
  };
  return {{"center", c.center}, {"semi_axes", c.semi_axes}, {"h0", poly(c.h0)}, {"h1", poly(c.h1)},
          {"g0", bump(c.g0)},   {"g1", bump(c.g1)}};
}

Volume4 render_cartoon(const CartoonSpec& spec, const GridDims& dims) {
  validate(dims);
  const std::size_t nsp = dims.spatial_size();
  std::vector<double> h0(nsp), h1(nsp);
  std::size_t q = 0;
  for (std::size_t i3 = 0; i3 < dims.n3; ++i3)
    for (std::size_t i2 = 0; i2 < dims.n2; ++i2)
      for (std::size_t i1 = 0; i1 < dims.n1; ++i1, ++q) {
        const double x1 = voxel_center(i1, dims.n1), x2 = voxel_center(i2, dims.n2), x3 = voxel_center(i3, dims.n3);
        h0[q] = spec.h0(x1, x2, x3);
        h1[q] = spec.inside(x1, x2, x3) ? spec.h1(x1, x2, x3) : 0.0;
      }
  Volume4 out(dims);
  for (std::size_t t = 0; t < dims.n4; ++t) {
    const double tt = (static_cast<double>(t) + 0.5) / static_cast<double>(dims.n4);
    const double a = spec.g0(tt), b = spec.g1(tt);
    auto frame = out.frame(t);
    for (std::size_t i = 0; i < nsp; ++i) frame[i] = h0[i] * a + h1[i] * b;
  }
  return out;
}

}  // namespace cylsh

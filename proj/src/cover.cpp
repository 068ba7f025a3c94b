#include "bs1d/cover.hpp"

#include "bs1d/warped.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bs1d {

Cover make_cover(const SampledSpace& space,
                 const std::vector<std::pair<std::string, std::vector<int>>>& members) {
  Cover cover;
  std::vector<char> covered(space.size, 0);
  for (const auto& [id, pts] : members) {
    CoverMember m;
    m.id = id;
    m.points = pts;
    std::sort(m.points.begin(), m.points.end());
    std::vector<char> inside(space.size, 0);
    for (int p : m.points) {
      inside[p] = 1;
      covered[p] = 1;
    }
    m.dist_to_complement.reserve(m.points.size());
    for (int p : m.points) {
      double best = -1;
      for (int y = 0; y < space.size; ++y)
        if (!inside[y]) {
          const double dd = space.metric(p, y);
          if (best < 0 || dd < best) best = dd;
        }
      m.dist_to_complement.push_back(best < 0 ? 1.0 : best);
    }
    cover.members.push_back(std::move(m));
  }
  for (int p = 0; p < space.size; ++p)
    if (!covered[p]) throw std::invalid_argument("member union misses a point");
  return cover;
}

long cover_dimension(const SampledSpace& space, const Cover& cover) {
  std::vector<int> count(space.size, 0);
  for (const auto& m : cover.members)
    for (int p : m.points) ++count[p];
  long best = 0;
  for (int p = 0; p < space.size; ++p) best = std::max<long>(best, count[p] - 1);
  return best;
}

bool lebesgue_check(const SampledSpace& space, const Cover& cover, double beta) {
  if (beta <= 0) throw std::invalid_argument("beta > 0 required");
  for (int x = 0; x < space.size; ++x) {
    bool found = false;
    for (const auto& m : cover.members) {
      std::vector<char> inside(space.size, 0);
      for (int p : m.points) inside[p] = 1;
      bool fits = true;
      for (int y = 0; y < space.size && fits; ++y)
        if (space.metric(x, y) < beta && !inside[y]) fits = false;
      if (fits) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

BarycentricPoint canonical_map(const Cover& cover, int point) {
  BarycentricPoint out;
  double total = 0;
  for (const auto& m : cover.members) {
    auto it = std::lower_bound(m.points.begin(), m.points.end(), point);
    if (it != m.points.end() && *it == point) {
      const double dd = m.dist_to_complement[it - m.points.begin()];
      out.weights[m.id] = dd;
      total += dd;
    }
  }
  if (total <= 0) throw std::logic_error("canonical map undefined: point uncovered");
  for (auto& [id, w] : out.weights) w /= total;
  return out;
}

double l1_distance(const BarycentricPoint& x, const BarycentricPoint& y) {
  double total = 0;
  for (const auto& [id, w] : x.weights) {
    auto it = y.weights.find(id);
    total += std::fabs(w - (it == y.weights.end() ? 0.0 : it->second));
  }
  for (const auto& [id, w] : y.weights)
    if (!x.weights.count(id)) total += std::fabs(w);
  return total;
}

LipschitzReport lipschitz_check(const SampledSpace& space, const Cover& cover,
                                double beta) {
  LipschitzReport report;
  report.beta = beta;
  if (!lebesgue_check(space, cover, beta))
    throw std::invalid_argument("lebesgue_check fails for this beta");
  report.dimension = cover_dimension(space, cover);
  const double N = static_cast<double>(report.dimension);
  report.threshold = beta / (4.0 * N);
  report.coefficient = 16.0 * N * N / beta;
  std::vector<BarycentricPoint> images(space.size);
  for (int p = 0; p < space.size; ++p) images[p] = canonical_map(cover, p);
  for (int x = 0; x < space.size; ++x) {
    for (int y = x + 1; y < space.size; ++y) {
      const double dd = space.metric(x, y);
      if (dd > report.threshold || dd <= 0) continue;
      ++report.pairs_checked;
      const double image = l1_distance(images[x], images[y]);
      const double ratio = image / (report.coefficient * dd);
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }
  report.pass = report.max_ratio <= 1.0;
  return report;
}

FCoverReport f_cover_axioms(const FCoverFixture& fixture) {
  FCoverReport report;
  auto apply = [&](const std::vector<int>& g, const std::vector<int>& set) {
    std::set<int> out;
    for (int p : set) out.insert(g[p]);
    return std::vector<int>(out.begin(), out.end());
  };
  std::vector<std::vector<int>> sorted_members;
  for (auto m : fixture.member_sets) {
    std::sort(m.begin(), m.end());
    sorted_members.push_back(m);
  }
  report.disjoint_or_equal = true;
  report.closed_under_action = true;
  report.stabilizers_ok = true;
  for (std::size_t ui = 0; ui < sorted_members.size(); ++ui) {
    std::vector<int> stab;
    for (std::size_t gi = 0; gi < fixture.group.size(); ++gi) {
      const auto image = apply(fixture.group[gi], sorted_members[ui]);
      if (image == sorted_members[ui]) stab.push_back(static_cast<int>(gi));
      // (i) translate equal or disjoint
      std::vector<int> inter;
      std::set_intersection(image.begin(), image.end(), sorted_members[ui].begin(),
                            sorted_members[ui].end(), std::back_inserter(inter));
      if (!inter.empty() && image != sorted_members[ui])
        report.disjoint_or_equal = false;
      // (ii) translate is a member
      if (std::find(sorted_members.begin(), sorted_members.end(), image) ==
          sorted_members.end())
        report.closed_under_action = false;
    }
    // (iii) stabilizer in the declared family
    if (std::find(fixture.allowed_stabilizers.begin(), fixture.allowed_stabilizers.end(),
                  stab) == fixture.allowed_stabilizers.end())
      report.stabilizers_ok = false;
  }
  report.pass =
      report.disjoint_or_equal && report.closed_under_action && report.stabilizers_ok;
  return report;
}

SampledSpace interval_space(double lo, double hi, double step) {
  SampledSpace space;
  std::vector<double> points;
  for (double x = lo; x <= hi + 0.5 * step; x += step) points.push_back(x);
  space.size = static_cast<int>(points.size());
  for (double x : points) space.labels.push_back(std::to_string(x));
  space.metric = [points](int a, int b) { return std::fabs(points[a] - points[b]); };
  return space;
}

Cover interval_cover_fixture(const SampledSpace& space) {
  // Members (i-1, i+2), i = 0..9, over [0, 10] sampled on the grid.
  std::vector<std::pair<std::string, std::vector<int>>> raw;
  const double step = 0.05;
  for (int i = 0; i < 10; ++i) {
    std::vector<int> pts;
    for (int p = 0; p < space.size; ++p) {
      const double x = p * step;
      if (x > i - 1 && x < i + 2) pts.push_back(p);
    }
    raw.emplace_back("U" + std::to_string(i), pts);
  }
  return make_cover(space, raw);
}

LoadedFixture load_cover_fixture_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  const std::string metric = j.at("metric").get<std::string>();
  LoadedFixture out;
  if (metric == "interval") {
    std::vector<double> pts = j.at("points").get<std::vector<double>>();
    out.space.size = static_cast<int>(pts.size());
    for (double x : pts) out.space.labels.push_back(std::to_string(x));
    out.space.metric = [pts](int a, int b) { return std::fabs(pts[a] - pts[b]); };
  } else if (metric == "tree-ball") {
    const long d = j.at("d").get<long>();
    std::vector<TreeVertex> verts;
    for (const auto& p : j.at("points")) {
      verts.push_back(vertex_canonicalize(parse_rational(p.at("x").get<std::string>()),
                                          p.at("k").get<long>(), d));
      out.space.labels.push_back(vertex_label(verts.back()));
    }
    out.space.size = static_cast<int>(verts.size());
    out.space.metric = [verts, d](int a, int b) {
      return static_cast<double>(tree_distance(verts[a], verts[b], d));
    };
  } else if (metric == "warped-sample") {
    const long d = j.at("d").get<long>();
    std::vector<SpacePoint> pts;
    for (const auto& p : j.at("points")) {
      SpacePoint sp;
      sp.z.base = vertex_canonicalize(parse_rational(p.at("x").get<std::string>()),
                                      p.at("k").get<long>(), d);
      sp.z.lambda = p.value("lambda", 0.0);
      sp.w = p.at("w").get<double>();
      pts.push_back(sp);
      out.space.labels.push_back(vertex_label(pts.back().z.base));
    }
    out.space.size = static_cast<int>(pts.size());
    out.space.metric = [pts, d](int a, int b) {
      return distance(pts[a], pts[b], d, 1e-9);
    };
  } else {
    throw std::invalid_argument("unknown metric registry name: " + metric);
  }
  std::vector<std::pair<std::string, std::vector<int>>> raw;
  for (const auto& m : j.at("members"))
    raw.emplace_back(m.at("id").get<std::string>(),
                     m.at("pointIds").get<std::vector<int>>());
  out.cover = make_cover(out.space, raw);
  return out;
}

}  // namespace bs1d

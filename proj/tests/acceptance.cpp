// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Diagnostics go to stderr, indented under each criterion.
//
// Criteria 1, 2 and 5 share trained models through a small cache, so each
// (type, seed) is trained once.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "npoly/analysis.hpp"
#include "npoly/convex.hpp"
#include "npoly/export.hpp"
#include "npoly/icosphere.hpp"
#include "npoly/levelset.hpp"
#include "npoly/train.hpp"
#include "test_support.hpp"

using namespace npoly;
namespace nt = npoly::testing;

namespace
{

constexpr double kPi = std::numbers::pi;

struct Verdict
{
  bool pass = true;
  std::string summary;
};

std::ostream& note()
{
  return std::cerr << "    ";
}

// Trained restarts per network type, default TrainConfig (seed 0, 5 restarts).
std::map<std::string, std::vector<RestartOutcome>>& cache()
{
  static std::map<std::string, std::vector<RestartOutcome>> trained;
  return trained;
}

const std::vector<RestartOutcome>& restarts_of(const NetworkSpec& spec)
{
  const std::string key = std::to_string(spec.input_dim) + ":" + spec.type_name();
  auto it = cache().find(key);
  if (it == cache().end()) {
    const auto start = std::chrono::steady_clock::now();
    it = cache().emplace(key, train_restarts(spec, TrainConfig{})).first;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    note() << "trained " << spec.type_name() << " d=" << spec.input_dim << " x" << it->second.size() << " in "
           << secs << " s\n";
  }
  return it->second;
}

TrainResult best_of(const NetworkSpec& spec)
{
  return select_best(restarts_of(spec));
}

TrainResult single_run(const NetworkSpec& spec)
{
  TrainConfig config;
  config.restarts = 1;
  return train(spec, config);
}

// Mean and max | r(u) - 1 | over the default extraction direction set.
std::pair<double, double> radial_error(const NetworkD& net)
{
  if (net.input_dim() == 2) {
    const auto [max, mean] = sphere_deviation(extract_polyline(net));
    return {mean, max};
  }
  const auto [max, mean] = sphere_deviation(extract_mesh(net));
  return {mean, max};
}

// Index of the antipode of each direction (columns of `dirs`).
std::vector<Eigen::Index> antipodes(const Eigen::Matrix3Xd& dirs)
{
  std::vector<Eigen::Index> out(dirs.cols(), -1);
  for (Eigen::Index i = 0; i < dirs.cols(); ++i) {
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
      if ((dirs.col(i) + dirs.col(j)).squaredNorm() < 1e-24) {
        out[i] = j;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict criterion_1()
{
  Verdict v;
  std::ostringstream summary;
  for (int n = 2; n <= 7; ++n) {
    const TrainResult best = best_of(NetworkSpec{2, {n}, {1.0}});
    std::string name = "none";
    double cv = std::nan("");
    double gap_error = std::nan("");
    bool ok = false;
    try {
      const PolytopeReport report = polygon_report(extract_polyline(best.network));
      name = report.identified.value_or("none");
      cv = report.edge_length_cv;
      gap_error = 0.0;
      for (double gap : weight_direction_spacing(best.network)) {
        gap_error = std::max(gap_error, std::abs(gap - kPi / n));
      }
      ok = report.identified == "regular " + std::to_string(2 * n) + "-gon" && cv < 0.01 && gap_error <= 0.02;
    } catch (const Error& e) {
      name = e.what();
    }
    note() << "(" << n << ";1) restart " << best.restart_index << " loss " << best.final_loss << ": " << name
           << ", edge_cv " << cv << ", max |gap - pi/n| " << gap_error << (ok ? "" : "  <-- fails") << "\n";
    v.pass = v.pass && ok;
    summary << (n > 2 ? ", " : "") << 2 * n << "-gon " << (ok ? "ok" : "FAILED");
  }
  v.summary = summary.str();
  return v;
}

Verdict criterion_2()
{
  Verdict v;
  std::ostringstream summary;
  const std::vector<std::pair<int, std::string>> cases{{3, "octahedron"}, {4, "cuboctahedron"}, {6, "icosidodecahedron"}};
  for (const auto& [n, expected] : cases) {
    const NetworkSpec spec{3, {n}, {1.0}};
    int hit = -1;
    for (const RestartOutcome& outcome : restarts_of(spec)) {
      if (!outcome.result) {
        note() << spec.type_name() << " restart " << outcome.restart_index << " diverged: " << outcome.error << "\n";
        continue;
      }
      const NetworkD& net = outcome.result->network;
      std::string verdict;
      try {
        const FaceCombinatorics fc = analyze_polyhedron(net, extract_mesh(net));
        const PolytopeReport& r = fc.report;
        verdict = "(" + std::to_string(r.vertex_count) + "," + std::to_string(r.edge_count) + "," +
                  std::to_string(r.face_count) + ") euler " + std::to_string(r.euler) + " edge_cv " +
                  std::to_string(r.edge_length_cv) + " -> " + r.identified.value_or("none");
        if (hit < 0 && r.identified == expected && r.euler == 2 && r.edge_length_cv < 0.02) {
          hit = outcome.restart_index;
        }
      } catch (const Error& e) {
        verdict = e.what();
      }
      note() << spec.type_name() << " restart " << outcome.restart_index << " loss " << outcome.result->final_loss
             << ": " << verdict << "\n";
    }
    v.pass = v.pass && hit >= 0;
    summary << (n > 3 ? ", " : "") << expected << (hit >= 0 ? " (restart " + std::to_string(hit) + ")" : " FAILED");
  }
  v.summary = summary.str();
  return v;
}

Verdict criterion_3()
{
  Verdict v;
  std::ostringstream summary;
  const std::vector<std::pair<int, int>> cases{{2, 2}, {2, 3}, {2, 5}, {3, 3}, {3, 4}, {3, 6}};
  double worst_loss = 0.0;
  double worst_r = 0.0;
  for (const auto& [d, n] : cases) {
    const TrainResult result = single_run(NetworkSpec{d, {n}, {2.0}});
    const double max_r = radial_error(result.network).second;
    const bool ok = result.final_loss < 1e-6 && max_r < 1e-3;
    note() << "(" << n << ";2) d=" << d << ": final_loss " << result.final_loss << ", max |r-1| " << max_r
           << (ok ? "" : "  <-- fails") << "\n";
    v.pass = v.pass && ok;
    worst_loss = std::max(worst_loss, result.final_loss);
    worst_r = std::max(worst_r, max_r);
  }
  summary << cases.size() << " nets, worst final_loss " << worst_loss << ", worst max |r-1| " << worst_r;
  v.summary = summary.str();
  return v;
}

Verdict criterion_4()
{
  Verdict v;
  const NetworkD octa_net = nt::identity_net(3, 1.0);
  const NetworkD p50_net = nt::identity_net(3, 50.0);
  const RadialMesh p50 = extract_mesh(p50_net);

  const FaceCombinatorics fc = analyze_polyhedron(octa_net, extract_mesh(octa_net));
  const ConvexPolytope3 cube = polar_dual(fc.polytope);
  const RadialMesh dual = sample_polytope(cube, p50);
  const double sup = hausdorff_distance(rescale_to_mean_radius(dual), rescale_to_mean_radius(p50));
  note() << "p=1 body " << fc.report.identified.value_or("none") << ", dual has " << cube.vertex_count()
         << " vertices; radial sup-difference to p=50 body " << sup << "\n";

  const double octa_back = vertex_set_distance(polar_dual(polar_dual(fc.polytope)), fc.polytope);
  const double cube_back = vertex_set_distance(polar_dual(polar_dual(cube)), cube);
  note() << "double dual: octahedron " << octa_back << ", cube " << cube_back << "\n";

  v.pass = fc.report.identified == "octahedron" && cube.vertex_count() == 8 && sup < 0.03 && octa_back <= 1e-9 &&
           cube_back <= 1e-9;
  std::ostringstream summary;
  summary << "sup-difference " << sup << " (< 0.03), double-dual " << std::max(octa_back, cube_back) << " (<= 1e-9)";
  v.summary = summary.str();
  return v;
}

Verdict criterion_5()
{
  Verdict v;
  int strict = 0;
  bool none_worse = true;
  std::ostringstream summary;
  for (int n : {4, 6, 8}) {
    const TrainResult shallow = best_of(NetworkSpec{3, {n}, {1.0}});
    const TrainResult deep = best_of(NetworkSpec{3, {n, 2}, {1.0, 1.0}});
    const double a = radial_error(shallow.network).first;
    const double b = radial_error(deep.network).first;
    note() << "n=" << n << ": mean |r-1| (" << n << ";1) " << a << " vs (" << n << ",2;1) " << b << "\n";
    none_worse = none_worse && b <= a;
    strict += b < a ? 1 : 0;
    summary << (n > 4 ? ", " : "") << "n=" << n << " " << b << (b < a ? " < " : (b <= a ? " = " : " > ")) << a;
  }
  v.pass = none_worse && strict >= 2;
  summary << " (strictly better in " << strict << "/3)";
  v.summary = summary.str();
  return v;
}

// Property suites on random and hand-set networks; no training.
Verdict criterion_6()
{
  std::mt19937_64 rng(606);
  std::map<std::string, long> failures;
  std::map<std::string, long> checks;
  auto expect = [&](const std::string& name, bool ok) {
    ++checks[name];
    failures[name] += ok ? 0 : 1;
  };

  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const int dim = 2 + i % 4;
    const NetworkD net = init_network(nt::random_spec(dim, rng, {0.6, 0.8, 1.0, 1.5, 2.0, 3.0}), 60000 + i);
    const Eigen::VectorXd x = nt::random_vector(dim, rng);
    const double lambda = std::exp(log_scale(rng));
    const double fx = forward(net, x);
    const double expected = std::pow(lambda, homogeneity_degree(net.spec())) * fx;
    expect("homogeneity", std::abs(forward(net, Eigen::VectorXd(lambda * x)) - expected) <=
                            1e-9 * std::max(1.0, std::abs(expected)));
    expect("evenness", forward(net, Eigen::VectorXd(-x)) == fx);

    if (nt::min_abs_preactivation(net, x) > 1e-3) {
      const Eigen::VectorXd fd = nt::central_difference([&](const Eigen::VectorXd& y) { return forward(net, y); }, x);
      const Eigen::VectorXd g = grad_input(net, x);
      expect("gradient", (g - fd).cwiseAbs().maxCoeff() <= 1e-5 * std::max(fd.cwiseAbs().maxCoeff(), 1e-3));
    }

    NetworkSpec full_rank = net.spec();
    full_rank.widths[0] = std::max(full_rank.widths[0], dim);
    const NetworkD ranked = init_network(full_rank, 70000 + i);
    const Eigen::VectorXd u = nt::random_unit(dim, rng);
    try {
      const double r = radius(ranked, u);
      const double oracle = nt::bisection_radius(ranked, u);
      expect("radius", std::abs(r - oracle) <= 1e-9 * std::max(1.0, oracle));
    } catch (const DegenerateDirection&) {
    }
  }

  // Euler on every accepted 3D report: hand-set solids, random rotations of
  // them, and every trained 3D model already in the cache.
  std::vector<NetworkD> solids{nt::identity_net(3, 1.0)};
  Eigen::MatrixXd diagonals(4, 3);
  diagonals << 1, 1, 1, 1, 1, -1, 1, -1, 1, -1, 1, 1;
  solids.push_back(nt::single_layer(diagonals, 1.0));
  for (int i = 0; i < 10; ++i) {
    solids.push_back(rotate_network(solids[i % 2], nt::random_rotation(3, rng)));
  }
  for (const auto& [key, outcomes] : cache()) {
    for (const auto& o : outcomes) {
      if (o.result && o.result->network.input_dim() == 3 && o.result->network.depth() == 1) {
        solids.push_back(o.result->network);
      }
    }
  }
  long accepted = 0;
  for (const NetworkD& net : solids) {
    const PolytopeReport report = analyze_network(net);
    if (report.diagnostic.empty()) {
      ++accepted;
      expect("euler", report.euler == 2 && report.vertex_count - report.edge_count + report.face_count == 2);
    }
  }
  note() << "Euler checked on " << accepted << " accepted 3D reports\n";

  // Model round trip and deterministic exports.
  const auto dir = nt::scratch_dir("acceptance");
  for (int i = 0; i < 20; ++i) {
    const int dim = 2 + i % 3;
    const NetworkD net = init_network(nt::random_spec(dim, rng, {1.0, 1.3, 2.0}), 80000 + i);
    write_model(ModelFile{net, static_cast<std::uint64_t>(i), Json::object()}, dir / "m.json");
    const NetworkD back = read_model(dir / "m.json").network;
    bool same = true;
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd x = nt::random_vector(dim, rng);
      same = same && forward(back, x) == forward(net, x);
    }
    expect("model round trip", same);
  }
  const NetworkD poly_net = init_network(NetworkSpec{2, {5}, {1.0}}, 1);
  const NetworkD mesh_net = init_network(NetworkSpec{3, {6}, {1.0}}, 2);
  for (int pass = 0; pass < 2; ++pass) {
    const std::string tag = std::to_string(pass);
    write_svg(extract_polyline(poly_net), {}, dir / ("a" + tag + ".svg"));
    write_obj(extract_mesh(mesh_net), dir / ("a" + tag + ".obj"));
    write_report(analyze_network(mesh_net), dir / ("a" + tag + ".report.json"));
  }
  for (const char* ext : {".svg", ".obj", ".report.json"}) {
    expect("byte-identical exports",
           read_text_file(dir / (std::string("a0") + ext)) == read_text_file(dir / (std::string("a1") + ext)));
  }

  Verdict v;
  std::ostringstream summary;
  bool first = true;
  for (const auto& [name, count] : checks) {
    note() << name << ": " << count - failures[name] << "/" << count << "\n";
    v.pass = v.pass && failures[name] == 0 && count > 0;
    summary << (first ? "" : ", ") << name << " " << count - failures[name] << "/" << count;
    first = false;
  }
  v.summary = summary.str();
  return v;
}

Verdict criterion_7()
{
  Verdict v;
  const TrainResult trained = single_run(NetworkSpec{5, {8}, {1.0}});
  note() << "(8;1) d=5 final loss " << trained.final_loss << "\n";
  const Icosphere sphere = make_icosphere(kDefaultMeshSubdivisions);
  const std::vector<Eigen::Index> anti = antipodes(sphere.vertices);
  double worst_level = 0.0;
  double worst_symmetry = 0.0;
  int produced = 0;
  for (int n = 0; n < 10; ++n) {
    const SliceSpec slice = theta_slice(5, n * kPi / 10.0);
    try {
      const RadialMesh mesh = slice_section(trained.network, slice);
      ++produced;
      for (Eigen::Index i = 0; i < mesh.size(); ++i) {
        const Eigen::VectorXd x = slice.basis * mesh.point(i);
        worst_level = std::max(worst_level, std::abs(forward(trained.network, x) - 1.0));
        if (anti[i] < 0) {
          worst_symmetry = std::numeric_limits<double>::infinity();
        } else {
          worst_symmetry = std::max(worst_symmetry, std::abs(mesh.radii[i] - mesh.radii[anti[i]]) / mesh.radii[i]);
        }
      }
    } catch (const DegenerateDirection& e) {
      note() << "theta = " << n << " pi/10: " << e.what() << "\n";
    }
  }
  note() << produced << " slices, max |f-1| " << worst_level << ", max antipodal radius mismatch " << worst_symmetry
         << "\n";
  v.pass = produced == 10 && worst_level <= 1e-8 && worst_symmetry <= 1e-9;
  std::ostringstream summary;
  summary << produced << "/10 slices, max |f-1| " << worst_level << " (<= 1e-8), antipodal mismatch "
          << worst_symmetry << " (<= 1e-9)";
  v.summary = summary.str();
  return v;
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
    {"1 regular 2n-gons from (n;1), d=2", criterion_1},
    {"2 octahedron / cuboctahedron / icosidodecahedron", criterion_2},
    {"3 exact sphere at p=2", criterion_3},
    {"4 polar duality p=1 vs p=50", criterion_4},
    {"5 depth helps", criterion_5},
    {"6 property suites", criterion_6},
    {"7 5-polytope slices", criterion_7},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    std::cerr << "[criterion " << name << "]\n";
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << v.summary << "  [" << secs
              << " s]" << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}

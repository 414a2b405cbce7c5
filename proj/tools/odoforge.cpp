// odoforge: finite odometer structures, transversal towers, Toeplitz window
// calculus and exact measure bounds, behind one command-line surface.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"
#include "odoforge/extension.hpp"
#include "odoforge/measure.hpp"
#include "odoforge/toeplitz.hpp"
#include "odoforge/verify.hpp"

using nlohmann::json;
using namespace odoforge;

namespace {

struct CommonArgs {
  std::string chain_path;
  std::string out_path;
  std::string format = "json";
};

void emit(const CommonArgs& args, const std::string& payload) {
  if (args.out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + args.out_path);
  out << payload;
}

void emit_json(const CommonArgs& args, const json& j) {
  emit(args, j.dump(2) + "\n");
}

ChainPtr load_chain(const std::string& path) {
  return std::make_shared<QuotientChain>(QuotientChain::load_file(path));
}

std::vector<GroupWord> parse_translators(const TransversalTower& tower,
                                         const std::string& spec) {
  const auto& chain = *tower.chain();
  if (spec.rfind("level:", 0) == 0) {
    int n = std::stoi(spec.substr(6));
    return tower.level(n);
  }
  return Window::parse(chain, spec).cells();
}

CylinderFamily parse_measure(ChainPtr chain, const std::string& spec, int depth) {
  if (spec == "uniform") return CylinderFamily::uniform(chain, depth);
  if (spec.rfind("point:", 0) == 0) {
    auto z = OdometerPoint::parse(chain, spec.substr(6));
    if (z.depth() < depth)
      throw FormatError("point must list at least " + std::to_string(depth) +
                        " levels");
    return CylinderFamily::point_mass(z, depth);
  }
  if (spec.rfind("word:", 0) == 0) {
    auto g = chain->parse_word(spec.substr(5));
    return CylinderFamily::point_mass(OdometerPoint::of_word(chain, depth, g), depth);
  }
  throw FormatError("measure spec must be uniform | point:CSV | word:W");
}

json phi_to_json(const PhiValue& v) {
  json j;
  switch (v.tag) {
    case PhiTag::Marker:
      j["tag"] = "marker";
      j["rep"] = v.marker_rep.str();
      break;
    case PhiTag::Free:
      j["tag"] = "free";
      j["base"] = v.free_pattern.base;
      if (!v.free_pattern.symbols.empty()) {
        j["symbols"] = v.free_pattern.symbols;
        j["stages"] = v.free_pattern.stages;
      }
      break;
    case PhiTag::Pending:
      j["tag"] = "pending";
      break;
  }
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"finite quotient chains, odometers, towers, Toeplitz windows "
               "and exact measure bounds"};
  app.require_subcommand(1);
  CommonArgs args;

  int jobs = 1;
  if (const char* env = std::getenv("ODOFORGE_JOBS")) jobs = std::atoi(env);
  std::uint64_t seed = 20240801;

  // ---- chain ----
  auto* chain_cmd = app.add_subcommand("chain", "chain inspection");
  auto* chain_show = chain_cmd->add_subcommand("show", "summary of a chain file");
  chain_show->add_option("--chain", args.chain_path)->required();
  chain_show->add_option("-o,--output", args.out_path);
  chain_show->callback([&] {
    auto chain = load_chain(args.chain_path);
    json j;
    j["backend"] = chain->backend() == Backend::Zd ? "zd" : "table";
    j["depth"] = chain->depth();
    j["rank"] = chain->rank();
    j["side"] = chain->side() == Side::Right ? "right" : "left";
    json idx = json::array();
    for (int n = 1; n <= chain->depth(); ++n) idx.push_back(chain->index(n));
    j["index_sizes"] = idx;
    emit_json(args, j);
  });

  // ---- odometer ----
  auto* odo = app.add_subcommand("odometer", "points, cells, action");
  auto* odo_cells = odo->add_subcommand("cells", "level cells with measures");
  int level = 1;
  odo_cells->add_option("--chain", args.chain_path)->required();
  odo_cells->add_option("--level", level)->required();
  odo_cells->add_option("-o,--output", args.out_path);
  odo_cells->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    json cells = json::array();
    for (int i = 0; i < static_cast<int>(chain->index(level)); ++i) {
      json c;
      c["id"] = chain->coset(level, tower->rep(level, i));
      c["rep"] = tower->rep(level, i).str();
      c["translator"] = tower->translator(level, i).str();
      c["measure"] = rational_str(cell_measure(*chain, level));
      cells.push_back(std::move(c));
    }
    json j;
    j["level"] = level;
    j["cells"] = cells;
    emit_json(args, j);
  });

  auto* odo_act = odo->add_subcommand("act", "translate a point");
  std::string word_str, point_str;
  odo_act->add_option("--chain", args.chain_path)->required();
  odo_act->add_option("--g", word_str)->required();
  odo_act->add_option("--point", point_str)->required();
  odo_act->add_option("-o,--output", args.out_path);
  odo_act->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto z = OdometerPoint::parse(chain, point_str);
    auto moved = act(chain->parse_word(word_str), z);
    json j;
    j["point"] = moved.str();
    j["cells"] = moved.cells();
    emit_json(args, j);
  });

  auto* odo_cert = odo->add_subcommand("freecert", "bounded freeness certificate");
  int radius = 4;
  odo_cert->add_option("--chain", args.chain_path)->required();
  odo_cert->add_option("--radius", radius);
  odo_cert->add_option("--point", point_str);
  odo_cert->add_option("-o,--output", args.out_path);
  odo_cert->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto z = point_str.empty()
                 ? OdometerPoint::basepoint(chain, chain->depth())
                 : OdometerPoint::parse(chain, point_str);
    auto rep = free_orbit_certificate(z, radius);
    json j;
    j["radius"] = rep.radius;
    j["levels_used"] = rep.levels_used;
    j["certified"] = rep.certified();
    json un = json::array();
    for (const auto& w : rep.unseparated) un.push_back(w.str());
    j["unseparated"] = un;
    emit_json(args, j);
    if (!rep.certified()) throw CLI::RuntimeError(1);
  });

  // ---- tower ----
  auto* tower_cmd = app.add_subcommand("tower", "transversal towers");
  auto* tower_build = tower_cmd->add_subcommand("build", "build and emit a tower");
  tower_build->add_option("--chain", args.chain_path)->required();
  tower_build->add_option("-o,--output", args.out_path);
  tower_build->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = TransversalTower::build(chain);
    json j = tower.to_json();
    j["coverage_radius"] = tower.coverage_radius();
    emit_json(args, j);
  });

  auto* tower_verify = tower_cmd->add_subcommand("verify", "check tower properties");
  std::string tower_path;
  tower_verify->add_option("--chain", args.chain_path)->required();
  tower_verify->add_option("--tower", tower_path);
  tower_verify->add_option("-o,--output", args.out_path);
  tower_verify->callback([&] {
    auto chain = load_chain(args.chain_path);
    TransversalTower tower = [&] {
      if (tower_path.empty()) return TransversalTower::build(chain);
      std::ifstream in(tower_path);
      if (!in) throw Error("cannot open tower file: " + tower_path);
      json tj;
      in >> tj;
      return TransversalTower::from_json(chain, tj);
    }();
    auto rep = verify_tower(tower);
    emit_json(args, tower_report_json(rep));
    if (!rep.pass()) throw CLI::RuntimeError(1);
  });

  auto* tower_thin = tower_cmd->add_subcommand("thin", "greedy ratio thinning");
  int plan_count = 0;
  tower_thin->add_option("--chain", args.chain_path)->required();
  tower_thin->add_option("--count", plan_count);
  tower_thin->add_option("-o,--output", args.out_path);
  tower_thin->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = TransversalTower::build(chain);
    auto plan = plan_count > 0 ? thin_for_p7(tower, plan_count) : thin_for_p7(tower);
    json j = plan_to_json(plan);
    j["full_capture_bound"] = rational_str(full_capture_bound(tower, plan));
    emit_json(args, j);
  });

  // ---- toeplitz ----
  auto* toep = app.add_subcommand("toeplitz", "stage-marked windows");
  std::string window_spec = "0..7", marking_spec = "cycle:ab", g_str;
  int depth = 0, factor_depth = 0;

  auto add_toeplitz_common = [&](CLI::App* cmd) {
    cmd->add_option("--chain", args.chain_path)->required();
    cmd->add_option("--depth", depth);
    cmd->add_option("--window", window_spec);
    cmd->add_option("--marking", marking_spec);
    cmd->add_option("--g", g_str);
    cmd->add_option("-o,--output", args.out_path);
  };
  auto make_window = [&](ChainPtr chain) {
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    int d = depth > 0 ? depth : chain->depth();
    Window w = Window::parse(*chain, window_spec);
    Marking m = Marking::parse(marking_spec);
    if (g_str.empty()) return generate_toeplitz(tower, m, d, w);
    return translate_toeplitz(tower, m, d, w, chain->parse_word(g_str));
  };

  auto* toep_window = toep->add_subcommand("window", "generate a window");
  add_toeplitz_common(toep_window);
  toep_window->add_option("--format", args.format)
      ->check(CLI::IsMember({"json", "txt", "pgm"}));
  toep_window->callback([&] {
    auto x = make_window(load_chain(args.chain_path));
    if (args.format == "txt")
      emit(args, render_text(x.data));
    else if (args.format == "pgm")
      emit(args, render_pgm(x.data));
    else {
      json j = window_to_json(x.data);
      j["depth"] = x.depth;
      j["base"] = x.base.str();
      emit_json(args, j);
    }
  });

  auto* toep_periods = toep->add_subcommand("periods", "per-symbol period sets");
  add_toeplitz_common(toep_periods);
  toep_periods->add_option("--level", level)->required();
  toep_periods->callback([&] {
    auto x = make_window(load_chain(args.chain_path));
    auto rep = per_sets(x, level);
    json j;
    j["level"] = rep.level;
    j["orbit_count"] = rep.orbit_count;
    json per = json::object();
    for (size_t a = 0; a < rep.per_cells.size(); ++a) {
      json cells = json::array();
      for (int p : rep.per_cells[a])
        cells.push_back(x.data.window.cell(static_cast<size_t>(p)).str());
      per[std::string(1, x.data.alphabet[a])] = cells;
    }
    j["per"] = per;
    emit_json(args, j);
  });

  auto* toep_essential = toep->add_subcommand("essential", "essential period scan");
  add_toeplitz_common(toep_essential);
  toep_essential->add_option("--level", level)->required();
  toep_essential->add_option("--radius", radius);
  toep_essential->callback([&] {
    auto x = make_window(load_chain(args.chain_path));
    auto v = essential_test(x, level, radius);
    json j;
    j["verdict"] = v.kind == EssentialVerdict::Kind::Essential ? "essential"
                   : v.kind == EssentialVerdict::Kind::NotEssential
                       ? "not-essential"
                       : "inconclusive";
    j["radius"] = v.radius;
    if (v.kind == EssentialVerdict::Kind::NotEssential) j["witness"] = v.witness.str();
    if (!v.note.empty()) j["note"] = v.note;
    emit_json(args, j);
  });

  auto* toep_factor = toep->add_subcommand("factor", "read the base point off a window");
  add_toeplitz_common(toep_factor);
  toep_factor->add_option("--factor-depth", factor_depth);
  toep_factor->callback([&] {
    auto x = make_window(load_chain(args.chain_path));
    int fd = factor_depth > 0 ? factor_depth : std::min(x.depth, 3);
    auto res = factor_to_odometer(x, fd);
    json j;
    if (res.point) {
      j["point"] = res.point->str();
      j["cells"] = res.point->cells();
    } else {
      j["inconclusive"] = res.note;
    }
    emit_json(args, j);
    if (!res.point) throw CLI::RuntimeError(1);
  });

  // ---- extension ----
  auto* ext = app.add_subcommand("extension", "stage maps and sampling");
  std::string y_str, translators_spec = "level:3", system_kind = "odometer";
  int stage_i = 0, level_k = 1;

  auto ext_system = [&](ChainPtr chain) {
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    int d = depth > 0 ? depth : chain->depth();
    int cmp = std::min(4, d);
    if (system_kind == "toeplitz")
      return PointedWindowSystem::toeplitz_system(
          tower, d, Marking::parse(marking_spec), Window::parse(*chain, window_spec),
          cmp);
    return PointedWindowSystem::odometer_system(tower, d, cmp);
  };

  auto* ext_resolve = ext->add_subcommand("resolve", "stage verdicts on a window");
  ext_resolve->add_option("--chain", args.chain_path)->required();
  ext_resolve->add_option("--point", point_str)->required();
  ext_resolve->add_option("--window", window_spec);
  ext_resolve->add_option("--depth", depth);
  ext_resolve->add_option("-o,--output", args.out_path);
  ext_resolve->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    auto z = OdometerPoint::parse(chain, point_str);
    Resolver resolver(tower, LevelView::identity(z.depth()));
    Window w = Window::parse(*chain, window_spec);
    json cells = json::array();
    for (size_t i = 0; i < w.size(); ++i) {
      auto v = resolver.resolve(z, w.cell(i));
      json c;
      c["cell"] = w.cell(i).str();
      if (v.resolved()) {
        c["stage"] = v.stage;
        c["rep"] = resolver.rep_word(v).str();
      } else {
        c["unresolved_at"] = z.depth();
      }
      cells.push_back(std::move(c));
    }
    json j;
    j["point"] = z.str();
    j["cells"] = cells;
    emit_json(args, j);
  });

  auto* ext_phi = ext->add_subcommand("phi", "stage-i map on a window");
  ext_phi->add_option("--chain", args.chain_path)->required();
  ext_phi->add_option("--y", y_str)->required();
  ext_phi->add_option("--stage", stage_i)->required();
  ext_phi->add_option("--window", window_spec);
  ext_phi->add_option("--depth", depth);
  ext_phi->add_option("--system", system_kind)->check(CLI::IsMember({"odometer", "toeplitz"}));
  ext_phi->add_option("--marking", marking_spec);
  ext_phi->add_option("-o,--output", args.out_path);
  ext_phi->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto sys = ext_system(chain);
    Window w = Window::parse(*chain, window_spec);
    auto values = phi_stage(sys, chain->parse_word(y_str), stage_i, w);
    json cells = json::array();
    for (size_t i = 0; i < w.size(); ++i) {
      json c = phi_to_json(values[i]);
      c["cell"] = w.cell(i).str();
      cells.push_back(std::move(c));
    }
    json j;
    j["stage"] = stage_i;
    j["cells"] = cells;
    emit_json(args, j);
  });

  auto* ext_sample = ext->add_subcommand("sample", "orbit windows of the extension");
  ext_sample->add_option("--chain", args.chain_path)->required();
  ext_sample->add_option("--translators", translators_spec);
  ext_sample->add_option("--window", window_spec);
  ext_sample->add_option("--depth", depth);
  ext_sample->add_option("--system", system_kind)->check(CLI::IsMember({"odometer", "toeplitz"}));
  ext_sample->add_option("--marking", marking_spec);
  ext_sample->add_option("-o,--output", args.out_path);
  ext_sample->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto sys = ext_system(chain);
    Window w = Window::parse(*chain, window_spec);
    auto hs = parse_translators(sys.tower(), translators_spec);
    auto samples = sample_extension_window(sys, hs, w);
    json arr = json::array();
    for (const auto& s : samples) {
      json rec;
      rec["translator"] = s.translator.str();
      rec["base"] = s.base_cells;
      json phi = json::array();
      for (const auto& v : s.phi) phi.push_back(phi_to_json(v));
      rec["phi"] = phi;
      arr.push_back(std::move(rec));
    }
    json j;
    j["samples"] = arr;
    j["distinct"] = arr.size();
    emit_json(args, j);
  });

  auto* ext_search = ext->add_subcommand("search", "bounded recurrence search");
  ext_search->add_option("--chain", args.chain_path)->required();
  ext_search->add_option("--y", y_str)->required();
  ext_search->add_option("--level", level_k)->required();
  ext_search->add_option("--radius", radius);
  ext_search->add_option("--depth", depth);
  ext_search->add_option("--system", system_kind)->check(CLI::IsMember({"odometer", "toeplitz"}));
  ext_search->add_option("--marking", marking_spec);
  ext_search->add_option("--window", window_spec);
  ext_search->add_option("-o,--output", args.out_path);
  ext_search->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto sys = ext_system(chain);
    auto found = bounded_minimality_search(sys, chain->parse_word(y_str), level_k, radius);
    json j;
    j["found"] = found.has_value();
    if (found) j["witness"] = found->str();
    emit_json(args, j);
  });

  auto* ext_code = ext->add_subcommand("code", "clopen partition recoding");
  std::string partition_spec = "symbols";
  ext_code->add_option("--chain", args.chain_path)->required();
  ext_code->add_option("--translators", translators_spec);
  ext_code->add_option("--window", window_spec);
  ext_code->add_option("--depth", depth);
  ext_code->add_option("--marking", marking_spec);
  ext_code->add_option("--partition", partition_spec);
  ext_code->add_option("-o,--output", args.out_path);
  ext_code->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    int d = depth > 0 ? depth : chain->depth();
    Marking m = Marking::parse(marking_spec);
    Window w = Window::parse(*chain, window_spec);
    auto hs = parse_translators(*tower, translators_spec);
    std::vector<WindowPredicate> preds;
    if (partition_spec == "symbols") {
      for (char c : m.alphabet()) preds.push_back(symbol_at_identity_predicate(c));
    } else if (partition_spec.rfind("base:", 0) == 0) {
      int n = std::stoi(partition_spec.substr(5));
      for (Cell c = 0; c < chain->index(n); ++c)
        preds.push_back(base_class_predicate(n, c));
    } else {
      throw FormatError("partition must be symbols | base:<level>");
    }
    auto coded = clopen_code(tower, m, d, hs, w, preds);
    json arr = json::array();
    for (const auto& cw : coded) {
      json rec;
      rec["translator"] = cw.translator.str();
      rec["codes"] = cw.codes;
      arr.push_back(std::move(rec));
    }
    json j;
    j["partition"] = partition_spec;
    j["coded"] = arr;
    emit_json(args, j);
  });

  auto* ext_fiber = ext->add_subcommand("fiber", "fiber product of sample families");
  ext_fiber->add_option("--chain", args.chain_path)->required();
  ext_fiber->add_option("--translators", translators_spec);
  ext_fiber->add_option("--window", window_spec);
  ext_fiber->add_option("--depth", depth);
  ext_fiber->add_option("--marking", marking_spec);
  ext_fiber->add_option("-o,--output", args.out_path);
  ext_fiber->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = std::make_shared<TransversalTower>(TransversalTower::build(chain));
    int d = depth > 0 ? depth : chain->depth();
    int cmp = std::min(4, d);
    Window w = Window::parse(*chain, window_spec);
    auto sysA = PointedWindowSystem::toeplitz_system(
        tower, d, Marking::parse(marking_spec), w, cmp);
    auto sysB = PointedWindowSystem::odometer_system(tower, d, cmp);
    auto hs = parse_translators(*tower, translators_spec);
    auto a = sample_extension_window(sysA, hs, w);
    auto b = sample_extension_window(sysB, hs, w);
    auto pairs = fiber_product(a, b);
    json arr = json::array();
    for (const auto& p : pairs)
      arr.push_back({{"left", a[p.left].translator.str()},
                     {"right", b[p.right].translator.str()}});
    json j;
    j["pairs"] = arr;
    emit_json(args, j);
  });

  // ---- measure ----
  auto* meas = app.add_subcommand("measure", "exact rational measure lab");
  std::string mu_spec = "uniform", nu_spec = "uniform", lambda_spec = "uniform";
  int n_idx = 1, k_idx = 1, horizon = 1;

  auto* meas_dist = meas->add_subcommand("distance", "partition metric with tail");
  meas_dist->add_option("--chain", args.chain_path)->required();
  meas_dist->add_option("--mu", mu_spec);
  meas_dist->add_option("--nu", nu_spec);
  meas_dist->add_option("--level", level)->required();
  meas_dist->add_option("-o,--output", args.out_path);
  meas_dist->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto a = parse_measure(chain, mu_spec, level);
    auto b = parse_measure(chain, nu_spec, level);
    auto d = metric_distance(a, b, level);
    json j;
    j["level"] = d.level;
    j["partial"] = rational_str(d.partial);
    j["tail"] = rational_str(d.tail);
    j["upper"] = rational_str(d.upper());
    emit_json(args, j);
  });

  auto* meas_avg = meas->add_subcommand("average", "transversal average");
  meas_avg->add_option("--chain", args.chain_path)->required();
  meas_avg->add_option("--lambda", lambda_spec);
  meas_avg->add_option("--level", level)->required();
  meas_avg->add_option("--depth", depth);
  meas_avg->add_option("-o,--output", args.out_path);
  meas_avg->callback([&] {
    auto chain = load_chain(args.chain_path);
    int d = depth > 0 ? depth : std::min(chain->depth(), level + 2);
    auto tower = TransversalTower::build(chain);
    auto lam = parse_measure(chain, lambda_spec, d);
    auto avg = average_over_transversal(lam, tower, level);
    json levels = json::array();
    for (int m = 1; m <= avg.depth(); ++m) {
      json weights = json::array();
      for (const auto& v : avg.level_weights(m)) weights.push_back(rational_str(v));
      levels.push_back(std::move(weights));
    }
    json j;
    j["averaged_at"] = level;
    j["levels"] = levels;
    emit_json(args, j);
  });

  auto* meas_vkn = meas->add_subcommand("vkn", "stage-truncation defect bound");
  meas_vkn->add_option("--chain", args.chain_path)->required();
  meas_vkn->add_option("--n", n_idx)->required();
  meas_vkn->add_option("--k", k_idx)->required();
  meas_vkn->add_option("--horizon", horizon)->required();
  meas_vkn->add_option("-o,--output", args.out_path);
  meas_vkn->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = TransversalTower::build(chain);
    auto plan = thin_for_p7(tower);
    auto b = vkn_bound(tower, plan, n_idx, k_idx, horizon);
    json j;
    j["plan"] = plan_to_json(plan);
    j["partial"] = rational_str(b.partial);
    j["tail"] = rational_str(b.tail);
    j["total"] = rational_str(b.total());
    emit_json(args, j);
  });

  auto* meas_emp = meas->add_subcommand("empirical", "witnessed defect fraction");
  std::string levels_spec;
  meas_emp->add_option("--chain", args.chain_path)->required();
  meas_emp->add_option("--n", n_idx);
  meas_emp->add_option("--k", k_idx)->required();
  meas_emp->add_option("--horizon", horizon)->required();
  meas_emp->add_option("--window", window_spec);
  meas_emp->add_option("--levels", levels_spec);
  meas_emp->add_option("-o,--output", args.out_path);
  meas_emp->callback([&] {
    auto chain = load_chain(args.chain_path);
    auto tower = TransversalTower::build(chain);
    json j;
    Rational frac;
    if (!levels_spec.empty()) {
      std::vector<int> levels;
      std::string cur;
      for (char c : levels_spec + ",") {
        if (c == ',') {
          if (!cur.empty()) levels.push_back(std::stoi(cur));
          cur.clear();
        } else
          cur += c;
      }
      auto view = LevelView::of_levels(levels);
      Window w = Window::parse(*chain, window_spec);
      frac = empirical_unresolved_fraction(tower, view, w, k_idx, horizon);
    } else {
      auto plan = thin_for_p7(tower);
      j["plan"] = plan_to_json(plan);
      frac = empirical_unresolved_fraction(tower, plan, n_idx, k_idx, horizon);
    }
    j["fraction"] = rational_str(frac);
    emit_json(args, j);
  });

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "invariant suites");
  auto* verify_all = verify->add_subcommand("all", "run the whole battery");
  int sweep_cases = 1000, tower_depth = 0;
  verify_all->add_option("--chain", args.chain_path)->required();
  verify_all->add_option("--jobs", jobs);
  verify_all->add_option("--seed", seed);
  verify_all->add_option("--sweep", sweep_cases);
  verify_all->add_option("--depth", tower_depth);
  verify_all->add_option("-o,--output", args.out_path);
  verify_all->callback([&] {
    VerifyConfig config;
    config.chain = load_chain(args.chain_path);
    config.chain_label = args.chain_path;
    config.jobs = jobs;
    config.seed = seed;
    config.sweep_cases = sweep_cases;
    config.tower_depth = tower_depth;
    auto report = run_verify_all(config);
    emit_json(args, verify_report_json(config, report));
    if (!report.pass()) {
      for (const auto& c : report.checks)
        if (!c.pass) {
          std::cerr << "first failure: " << c.id << " (" << c.detail << ")\n";
          break;
        }
      throw CLI::RuntimeError(1);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

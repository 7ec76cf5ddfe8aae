#include "treeqm/commands.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "treeqm/error.hpp"
#include "treeqm/finite_group.hpp"
#include "treeqm/instance_io.hpp"
#include "treeqm/labelling.hpp"
#include "treeqm/orbit_cache.hpp"
#include "treeqm/quasimorphism.hpp"

namespace treeqm {

  namespace {

    using json = nlohmann::ordered_json;

    int exit_for(ErrorKind kind) {
      switch (kind) {
        case ErrorKind::ResourceLimit:
        case ErrorKind::Inconclusive:
        case ErrorKind::RealizationFailed:
        case ErrorKind::NoOrbitVertexOnAxis:
        case ErrorKind::UndefinedInverseLabel: return exit_code::inconclusive;
        default: return exit_code::input;
      }
    }

    std::shared_ptr<Instance const> load(RunConfig const& config) {
      Instance inst = load_instance(config.instance_path);
      if (config.root_b) {
        inst = inst.rerooted();
      }
      return std::make_shared<Instance const>(std::move(inst));
    }

    TreeView make_view(std::shared_ptr<Instance const> const& inst, ViewMode mode) {
      return mode == ViewMode::suppressed ? suppress_valence2(inst) : TreeView(inst, mode);
    }

    std::unique_ptr<OrbitCache> make_cache(RunConfig const& config) {
      if (!config.use_cache) {
        return nullptr;
      }
      return std::make_unique<OrbitCache>(config.cache_dir ? *config.cache_dir
                                                           : OrbitCache::default_directory());
    }

    std::size_t thread_count(RunConfig const& config) {
      if (config.threads != 0) {
        return config.threads;
      }
      return std::max(1u, std::thread::hardware_concurrency());
    }

    std::string vertex_text(TreeView const& view, Vertex const& x) {
      auto const& inst = view.instance();
      std::string  g    = inst.format(view.representative(x));
      if (!inst.is_amalgam()) {
        return g;
      }
      return g + (view.type(x) == kFactorA ? " [A]" : " [B]");
    }

    json path_json(TreeView const& view, OrientedPath const& p) {
      return json{{"from", vertex_text(view, p.from)},
                  {"to", vertex_text(view, p.to)},
                  {"key", view.orbit_key(p).text}};
    }

    json header(RunConfig const& config, Instance const& inst, std::string const& command) {
      json h;
      h["tool"]    = "treeqm";
      h["command"] = command;
      h["instance"] = {{"path", config.instance_path.generic_string()},
                       {"hash", inst.hash_hex()},
                       {"kind", inst.is_amalgam() ? "amalgam" : "free"}};
      h["view"]   = std::string(to_string(config.view));
      h["root"]   = config.root_b ? "B" : "A";
      h["seed"]   = config.seed;
      h["budget"] = config.budget;
      if (inst.is_amalgam()) {
        json tr;
        for (int f : {kFactorA, kFactorB}) {
          json reps = json::array();
          for (int x : inst.transversal(f)) {
            reps.push_back(inst.group(f).name(x));
          }
          tr[f == kFactorA ? "A" : "B"] = reps;
        }
        h["transversals"] = {{"side", "left cosets xC, first element in table order"},
                             {"reps", tr}};
        h["minimality"] = "asserted, not checked: a proper amalgam acts minimally on its tree";
      } else {
        h["minimality"] = "asserted, not checked: a free group acts minimally on its Cayley tree";
      }
      return h;
    }

    std::string csv_field(std::string const& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
      }
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') {
          out += '"';
        }
        out += c;
      }
      return out + "\"";
    }

    std::string csv(std::vector<std::vector<std::string>> const& rows) {
      std::string out;
      for (auto const& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i > 0) {
            out += ',';
          }
          out += csv_field(row[i]);
        }
        out += '\n';
      }
      return out;
    }

    std::string dump(json const& j) {
      return j.dump(2) + "\n";
    }

    // every geodesic in the support of the coboundary runs through the
    // median of v, gv, ghv
    bool median_support_holds(TreeView const& view,
                              Element const&  g,
                              Element const&  h,
                              std::size_t     n,
                              WindowMode      mode) {
      auto const&  inst = view.instance();
      Vertex const v    = view.base();
      Vertex const m    = view.median(v, view.act(g, v), view.act(inst.multiply(g, h), v));
      SparseChain const chain = coboundary_chain(view, g, h, n, mode);
      for (auto const& [p, value] : chain.entries()) {
        if (p.from != m && p.to != m && !view.interior_contains(p, m)) {
          return false;
        }
      }
      return true;
    }

    OrientedPath chosen_segment(TreeView const& view, RunConfig const& config) {
      if (config.segment) {
        Element const g = view.instance().parse_element(*config.segment);
        return view.geodesic(view.base(), view.act(g, view.base()));
      }
      auto first = view.paths_from(view.base(), 1, config.window, config.budget);
      if (first.empty()) {
        throw Error(ErrorKind::PreconditionViolated, "no geodesic of size 1 at the base vertex");
      }
      return first.front();
    }

    json spec_json(TreeView const& view, OrientedPath const& s, QmSpec const& spec) {
      return json{{"segment", path_json(view, s)},
                  {"key", spec.orbit.text},
                  {"window", std::string(to_string(spec.mode))},
                  {"n", spec.n}};
    }

    template <typename F>
    CommandResult guarded(F&& body) {
      try {
        return body();
      } catch (Error const& e) {
        json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
        return {dump(j), exit_for(e.kind())};
      } catch (std::exception const& e) {
        json j{{"error", "InputError"}, {"message", e.what()}};
        return {dump(j), exit_code::input};
      }
    }

  }  // namespace

  CommandResult cmd_inspect(RunConfig const& config) {
    return guarded([&]() -> CommandResult {
      auto const  inst  = load(config);
      auto const  cache = make_cache(config);
      auto const& I     = *inst;
      json        r     = header(config, I, "inspect");

      json tree;
      if (I.is_amalgam()) {
        tree["raw_valence"] = {{"A", I.index(kFactorA)}, {"B", I.index(kFactorB)}};
      } else {
        tree["raw_valence"] = {{"vertex", 2 * I.rank()}};
      }
      json sup;
      try {
        TreeView const sv = suppress_valence2(inst);
        auto const     e  = sv.paths_from(sv.base(), 1, WindowMode::orbit, config.budget).front();
        Geodesic const ge(sv, e);
        sup["hidden_type"] = sv.hidden_type() ? json(*sv.hidden_type() == kFactorA ? "A" : "B")
                                              : json(nullptr);
        sup["o_edge_raw_length"] = ge.raw_length();
        sup["o_vertex_valence"]  = sv.neighbors(sv.base()).size();
      } catch (Error const& e) {
        if (e.kind() != ErrorKind::DegenerateTree) {
          throw;
        }
        sup["degenerate"] = e.what();
      }
      tree["suppression"] = sup;
      r["tree"]           = tree;

      TreeView const view = make_view(inst, config.view);
      json           rows = json::array();
      bool           truncated = false;
      for (std::size_t n = 1; n <= config.kmax; ++n) {
        json row{{"n", n}};
        for (auto mode : {WindowMode::metric, WindowMode::orbit}) {
          try {
            row[std::string(to_string(mode))]
                = view.enumerate_orbits(n, mode, config.budget, cache.get()).size();
          } catch (Error const& e) {
            if (e.kind() != ErrorKind::ResourceLimit) {
              throw;
            }
            row[std::string(to_string(mode))] = nullptr;
            truncated                         = true;
          }
        }
        rows.push_back(row);
      }
      r["orbit_counts"]           = rows;
      r["orbit_counts_truncated"] = truncated;

      if (I.is_amalgam()) {
        auto const        image = I.subgroup_image(kFactorA);
        std::size_t const dc    = double_coset_count(I.group(kFactorA), image, image);
        auto const        bc    = static_cast<std::size_t>(I.index(kFactorB));
        r["double_cosets"]      = {{"C\\A/C", dc},
                                   {"B/C", bc},
                                   {"fujiwara_criterion",
                                    dc >= 3 && bc >= 2 ? "satisfied" : "not satisfied"}};
        TreeView const raw(inst, ViewMode::raw);
        std::size_t    bb = 0;
        for (auto const& [key, p] :
             raw.enumerate_orbits(2, WindowMode::metric, config.budget, cache.get())) {
          bb += raw.type(p.from) == kFactorB && raw.type(p.to) == kFactorB;
        }
        r["raw_metric2_BB_orbits"] = bb;
      }

      // pointwise stabilisers of v and a seeded sample of nearby o-vertices
      std::vector<Vertex> ball = view.o_ball(3, config.budget);
      std::erase(ball, view.base());
      std::vector<Vertex> picked;
      std::mt19937_64     rng(config.seed);
      std::sample(ball.begin(), ball.end(), std::back_inserter(picked), 8, rng);
      json stabs = json::array();
      for (auto const& w : picked) {
        stabs.push_back({{"w", vertex_text(view, w)},
                         {"distance", view.distance(view.base(), w)},
                         {"order", view.pointwise_stabilizer_order(view.base(), w)}});
      }
      r["pointwise_stabilizers"] = stabs;

      if (config.format == OutputFormat::csv) {
        std::vector<std::vector<std::string>> out{{"instance_hash", "n", "metric", "orbit"}};
        for (auto const& row : rows) {
          auto cell = [&](char const* k) {
            return row[k].is_null() ? std::string() : std::to_string(row[k].get<std::size_t>());
          };
          out.push_back({I.hash_hex(), std::to_string(row["n"].get<std::size_t>()),
                         cell("metric"), cell("orbit")});
        }
        return {csv(out), truncated ? exit_code::inconclusive : exit_code::ok};
      }
      return {dump(r), truncated ? exit_code::inconclusive : exit_code::ok};
    });
  }

  CommandResult cmd_classify(RunConfig const& config) {
    return guarded([&]() -> CommandResult {
      auto const     inst  = load(config);
      auto const     cache = make_cache(config);
      TreeView const view  = make_view(inst, config.view);
      ClassifyOptions opts;
      opts.budget = config.budget;
      opts.cache  = cache.get();
      Certificate const cert = classify(view, config.kmax, opts);

      json r = header(config, *inst, "classify");
      json c;
      c["verdict"]      = std::string(to_string(cert.verdict));
      c["provenance"]   = cert.provenance;
      c["kmax"]         = cert.kmax;
      c["k"]            = cert.k == 0 ? json(nullptr) : json(cert.k);
      c["orbit_counts"] = cert.orbit_counts;
      if (cert.verdict == Verdict::CaseI) {
        c["l"] = cert.l;
      }
      if (cert.labelling) {
        json labels = json::array();
        for (auto const& [key, letter] : cert.labelling->labels) {
          json entry{{"key", key.text}, {"letter", std::string(1, letter)}};
          if (auto it = cert.labelling->representatives.find(key);
              it != cert.labelling->representatives.end()) {
            entry["representative"] = path_json(view, it->second);
          }
          labels.push_back(entry);
        }
        c["labelling"] = {{"k", cert.labelling->k}, {"labels", labels}};
      }
      json wit = json::array();
      for (auto const& p : cert.witnesses) {
        wit.push_back(path_json(view, p));
      }
      c["witnesses"] = wit;
      if (cert.lambda) {
        json rows = json::array();
        for (auto const& row : cert.lambda->edge) {
          rows.push_back(json::array({row[0], row[1], row[2]}));
        }
        c["lambda"] = rows;
      }
      if (cert.orientation) {
        c["orientation"] = {{"ball_radius", cert.ball_radius},
                            {"ok", cert.orientation->ok},
                            {"directed_edges", cert.orientation->edges.size()},
                            {"failure", cert.orientation->failure}};
      }
      if (!cert.note.empty()) {
        c["note"] = cert.note;
      }
      r["certificate"] = c;

      int const code = cert.verdict == Verdict::Inconclusive ? exit_code::inconclusive
                                                             : exit_code::ok;
      if (config.format == OutputFormat::csv) {
        std::string counts;
        for (auto n : cert.orbit_counts) {
          counts += (counts.empty() ? "" : " ") + std::to_string(n);
        }
        return {csv({{"instance_hash", "verdict", "provenance", "k", "orbit_counts"},
                     {inst->hash_hex(), std::string(to_string(cert.verdict)), cert.provenance,
                      std::to_string(cert.k), counts}}),
                code};
      }
      return {dump(r), code};
    });
  }

  CommandResult cmd_qm(RunConfig const& config) {
    return guarded([&]() -> CommandResult {
      auto const     inst = load(config);
      TreeView const view = make_view(inst, config.view);
      OrientedPath const s    = chosen_segment(view, config);
      QmSpec const       spec = make_spec(view, s, config.window);

      std::vector<Element> elements;
      if (config.elements.empty()) {
        elements = view.element_ball(config.radius, config.budget);
      } else {
        for (auto const& w : config.elements) {
          elements.push_back(inst->parse_element(w));
        }
      }
      json r        = header(config, *inst, "qm");
      r["spec"]     = spec_json(view, s, spec);
      json values   = json::array();
      std::vector<std::vector<std::string>> rows{{"instance_hash", "spec_key", "element", "f"}};
      for (auto const& g : elements) {
        std::int64_t const f = median_qm(view, spec, g);
        values.push_back({{"element", inst->format(g)}, {"f", f}});
        rows.push_back({inst->hash_hex(), spec.orbit.text, inst->format(g), std::to_string(f)});
      }
      r["values"] = values;
      if (config.format == OutputFormat::csv) {
        return {csv(rows), exit_code::ok};
      }
      return {dump(r), exit_code::ok};
    });
  }

  CommandResult cmd_defect(RunConfig const& config) {
    return guarded([&]() -> CommandResult {
      auto const     inst = load(config);
      TreeView const view = make_view(inst, config.view);
      OrientedPath const s    = chosen_segment(view, config);
      QmSpec const       spec = make_spec(view, s, config.window);

      DefectOptions opts;
      opts.threads      = thread_count(config);
      opts.sample       = config.sample;
      opts.seed         = config.seed;
      opts.budget       = config.budget;
      DefectResult const d = defect_scan(view, spec, config.radius, opts);

      // median support on the argmax pair and on every pair of the unit ball
      std::size_t checked = 0, violations = 0;
      auto check = [&](Element const& g, Element const& h) {
        ++checked;
        violations += !median_support_holds(view, g, h, spec.n, spec.mode);
      };
      check(d.g, d.h);
      auto const unit = view.element_ball(1, config.budget);
      for (auto const& g : unit) {
        for (auto const& h : unit) {
          check(g, h);
        }
      }

      json r       = header(config, *inst, "defect");
      r["spec"]    = spec_json(view, s, spec);
      r["radius"]  = config.radius;
      r["scan"]    = {{"ball", "d(v, gv) <= 2 * radius"},
                      {"elements", d.elements},
                      {"pairs", d.pairs},
                      {"sampled", config.sample.has_value()}};
      r["max_defect"] = d.max_defect;
      r["argmax"]     = {{"g", inst->format(d.g)}, {"h", inst->format(d.h)}};
      r["median_support"] = {{"pairs_checked", checked},
                             {"violations", violations},
                             {"holds", violations == 0}};
      int const code = violations == 0 ? exit_code::ok : exit_code::fail;
      if (config.format == OutputFormat::csv) {
        return {csv({{"instance_hash", "spec_key", "g", "h", "defect", "median_support"},
                     {inst->hash_hex(), spec.orbit.text, inst->format(d.g), inst->format(d.h),
                      std::to_string(d.max_defect), violations == 0 ? "holds" : "violated"}}),
                code};
      }
      return {dump(r), code};
    });
  }

  CommandResult cmd_witness(RunConfig const& config) {
    return guarded([&]() -> CommandResult {
      auto const     inst  = load(config);
      auto const     cache = make_cache(config);
      TreeView const view  = make_view(inst, config.view);
      auto const&    I     = *inst;
      ClassifyOptions opts;
      opts.budget = config.budget;
      opts.cache  = cache.get();
      Certificate const cert = classify(view, config.kmax, opts);
      if (cert.verdict != Verdict::CaseIII || !cert.labelling) {
        throw Error(ErrorKind::Inconclusive,
                    "witnesses need a CaseIII labelling; classify gave "
                        + std::string(to_string(cert.verdict)));
      }
      Labelling const& lab = *cert.labelling;
      if (config.count == 0) {
        throw Error(ErrorKind::PreconditionViolated, "count must be at least 1");
      }
      std::vector<std::pair<std::size_t, std::size_t>> requests;
      for (std::size_t n = 1; n <= config.count; ++n) {
        for (std::size_t i = 1; i <= 3; ++i) {
          requests.emplace_back(n, i);
        }
      }
      check_exponents(requests, config.words);

      std::vector<WitnessSet> ws;
      for (std::size_t n = 1; n <= config.count; ++n) {
        ws.push_back(build_witness(view, lab, n, config.words, config.budget));
      }
      IndependenceReport const rep
          = independence_matrix(view, ws, config.zmax, thread_count(config));

      // translates of distinct family words overlap by at most k plus their
      // longest common factor (also against the reversed word)
      json overlaps   = json::array();
      bool overlap_ok = true;
      for (std::size_t a = 0; a < ws.size() * 3; ++a) {
        for (std::size_t b = a + 1; b < ws.size() * 3; ++b) {
          auto const& wa  = ws[a / 3];
          auto const& wb  = ws[b / 3];
          std::size_t const L
              = max_translate_overlap(view, wa.paths[a % 3], wb.paths[b % 3], config.budget);
          std::string inv;
          try {
            inv = word_inverse(view, lab, wb.words[b % 3]);
          } catch (Error const&) {
            inv = word_reverse(wb.words[b % 3]);
          }
          std::size_t const common
              = std::max(longest_common_subword(wa.words[a % 3], wb.words[b % 3]),
                         longest_common_subword(wa.words[a % 3], inv));
          bool const ok = L <= lab.k + common;
          overlap_ok &= ok;
          overlaps.push_back({{"a", "w" + std::to_string(wa.n) + std::to_string(a % 3 + 1)},
                              {"b", "w" + std::to_string(wb.n) + std::to_string(b % 3 + 1)},
                              {"overlap", L},
                              {"bound", lab.k + common},
                              {"ok", ok}});
        }
      }

      json r      = header(config, I, "witness");
      r["params"] = {{"v0", config.words.v0},
                     {"blocks", config.words.blocks},
                     {"strict_exponents", config.words.strict},
                     {"count", config.count},
                     {"zmax", config.zmax},
                     {"kmax", config.kmax}};
      r["labelling"] = {{"k", lab.k}, {"provenance", lab.provenance}};
      json sets      = json::array();
      for (auto const& w : ws) {
        json words = json::array(), gs = json::array();
        for (std::size_t i = 0; i < 3; ++i) {
          words.push_back(w.words[i]);
          gs.push_back(I.format(w.g[i]));
        }
        sets.push_back({{"n", w.n},
                        {"words", words},
                        {"g", gs},
                        {"eta", I.format(w.eta)},
                        {"h", I.format(w.h)},
                        {"s", path_json(view, w.s)},
                        {"s_o_length", w.spec.n},
                        {"junction_on_s", w.junction_ok}});
      }
      r["witnesses"] = sets;
      json matrix    = json::array();
      std::vector<std::vector<std::string>> rows{
          {"instance_hash", "n", "m", "z", "eta_power", "h_power", "product", "verdict"}};
      std::string const verdict = rep.pass && overlap_ok ? "PASS" : "FAIL";
      for (auto const& e : rep.entries) {
        matrix.push_back({{"n", e.n}, {"m", e.m}, {"z", e.z},
                          {"eta_power", e.eta}, {"h_power", e.h}, {"product", e.product}});
        rows.push_back({I.hash_hex(), std::to_string(e.n), std::to_string(e.m),
                        std::to_string(e.z), std::to_string(e.eta), std::to_string(e.h),
                        std::to_string(e.product), verdict});
      }
      r["matrix"] = matrix;
      json diag   = json::array();
      for (std::size_t i = 0; i < rep.diagonal.size(); ++i) {
        auto const& d = rep.diagonal[i];
        diag.push_back({{"n", ws[i].n},
                        {"limit", d.limit.to_string()},
                        {"stabilized", d.stabilized},
                        {"values", d.values}});
      }
      r["homogenized_diagonal"] = diag;
      r["overlaps"]             = overlaps;
      r["verdict"]              = verdict;
      if (!rep.pass) {
        r["failure"] = rep.failure;
      } else if (!overlap_ok) {
        r["failure"] = "an overlap exceeds its bound";
      }
      r["construction"] = "s_n is the axis segment [p, gp] of g = g_n1 g_n3; no intermediate "
                          "o-edge is inserted between the two word parts";
      r["scope"] = "finite check at the given zmax; evidence for the independence "
                   "hypotheses, not a proof of linear independence";
      int const code = verdict == "PASS" ? exit_code::ok : exit_code::fail;
      if (config.format == OutputFormat::csv) {
        return {csv(rows), code};
      }
      return {dump(r), code};
    });
  }

  CommandResult run_command(std::string const& name, RunConfig const& config) {
    if (name == "inspect") return cmd_inspect(config);
    if (name == "classify") return cmd_classify(config);
    if (name == "qm") return cmd_qm(config);
    if (name == "defect") return cmd_defect(config);
    if (name == "witness") return cmd_witness(config);
    json j{{"error", "InputError"}, {"message", "unknown command " + name}};
    return {dump(j), exit_code::input};
  }

}  // namespace treeqm

#ifndef SUBSIZE_RUNNER_HPP
#define SUBSIZE_RUNNER_HPP

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "subsize/builtins.hpp"
#include "subsize/checkers.hpp"
#include "subsize/constructions.hpp"
#include "subsize/group_descriptor.hpp"
#include "subsize/ideal.hpp"
#include "subsize/ramsey.hpp"
#include "subsize/report.hpp"

namespace subsize {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;

/// Command-line values that take precedence over the config file.
struct Overrides
{
  std::optional<std::size_t> window;
  std::optional<std::uint64_t> seed;
};

struct RunResult
{
  json report;
  std::string summary;
  int exit_code = kExitOk;
};

inline std::string utc_timestamp()
{
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Drops the fields that legitimately differ between identical runs.
inline json strip_nondeterministic(json j)
{
  if (j.is_object()) {
    j.erase("timestamp");
    j.erase("runtime_ms");
    for (auto &[k, v] : j.items())
      v = strip_nondeterministic(v);
  } else if (j.is_array()) {
    for (auto &v : j)
      v = strip_nondeterministic(v);
  }
  return j;
}

inline const std::set<std::string> &known_checkers()
{
  static const std::set<std::string> names{
    "large", "small", "thin", "n-thin", "stripe", "rectangle", "bounded-rectangles", "sparse",
    "ramsey-product", "fp", "ps-fp", "scattered", "product-not-sparse", "ideal-member",
    "bounded-supt-scatter", "bipartite-ramsey", "witness-conditions", "lemma31",
    "transposition-family"};
  return names;
}

namespace detail {

inline std::size_t size_param(const json &p, const char *key, std::optional<std::size_t> fallback = {})
{
  if (!p.contains(key)) {
    if (fallback)
      return *fallback;
    throw spec_error(std::string("missing parameter \"") + key + "\"");
  }
  if (!p[key].is_number_unsigned() && !(p[key].is_number_integer() && p[key].get<std::int64_t>() >= 0))
    throw spec_error(std::string("parameter \"") + key + "\" must be a non-negative integer");
  return p[key].get<std::size_t>();
}

/// Checks builtin names and parameters without materializing anything.
template<Group G>
void validate_spec(const G &group, const SpecPtr<element_t<G>> &s, const std::set<std::string> &constructions)
{
  using Sp = SubsetSpec<element_t<G>>;
  std::visit(
    [&](const auto &n) {
      using N = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<N, typename Sp::Builtin>) {
        builtin_predicate(group, n.name, n.params);
      } else if constexpr (std::is_same_v<N, typename Sp::Constructed>) {
        if (!constructions.count(n.id))
          throw spec_error("unknown construction \"" + n.id + "\"");
      } else if constexpr (std::is_same_v<N, typename Sp::Translate> || std::is_same_v<N, typename Sp::Inverse> ||
                           std::is_same_v<N, typename Sp::WindowComplement>) {
        validate_spec(group, n.of, constructions);
      } else if constexpr (std::is_same_v<N, typename Sp::Product> || std::is_same_v<N, typename Sp::Difference>) {
        validate_spec(group, n.left, constructions);
        validate_spec(group, n.right, constructions);
      } else if constexpr (std::is_same_v<N, typename Sp::Union> || std::is_same_v<N, typename Sp::Intersection>) {
        for (const auto &p : n.parts)
          validate_spec(group, p, constructions);
      }
    },
    s->node);
}

/// A witness built from a config entry, for any group.
template<Group G>
struct Built
{
  std::string kind;
  std::optional<SparseWitness<G>> sparse;
  std::optional<RectWitness<G>> rect;
  std::optional<TranspositionFamily> family;
  json file;
  std::string error;
};

template<Group G>
Built<G> build_witness(const Context<G> &ctx, const json &c, std::uint64_t seed)
{
  Built<G> b;
  b.kind = c.at("kind").get<std::string>();
  const G &group = ctx.group();
  try {
    if (b.kind == "sparse") {
      b.sparse = construct_sparse_witness(ctx, size_param(c, "n_max"), size_param(c, "reps_per_level"), seed,
                                          size_param(c, "scan_budget", 1'000'000));
      b.file = witness_to_json(group, *b.sparse);
    } else if (b.kind == "rect") {
      b.rect = construct_thin_unbounded_rect(ctx, size_param(c, "n_max"), seed,
                                             size_param(c, "scan_budget", 1'000'000));
      b.file = witness_to_json(group, *b.rect);
    } else if (b.kind == "transposition") {
      if constexpr (std::is_same_v<G, FinPerm>) {
        b.family = construct_transposition_family(size_param(c, "m"), seed);
        b.file = witness_to_json(*b.family);
      } else {
        throw spec_error("transposition families live in fin-perm");
      }
    } else {
      throw spec_error("unknown construction kind \"" + b.kind + "\"");
    }
  } catch (const construction_stalled &e) {
    b.error = std::string(e.what()) + " (condition " + std::to_string(e.condition()) + ")";
  }
  return b;
}

template<Group G>
Built<G> load_witness(const G &group, const json &file)
{
  Built<G> b;
  if (!file.is_object() || !file.contains("kind") || !file["kind"].is_string())
    throw spec_error("witness file needs a \"kind\"");
  b.kind = file["kind"].get<std::string>();
  b.file = file;
  if (b.kind == "sparse")
    b.sparse = sparse_witness_from_json(group, file);
  else if (b.kind == "rect")
    b.rect = rect_witness_from_json(group, file);
  else if (b.kind == "transposition") {
    if constexpr (std::is_same_v<G, FinPerm>)
      b.family = transposition_family_from_json(file);
    else
      throw spec_error("transposition witnesses live in fin-perm");
  } else
    throw spec_error("unknown witness kind \"" + b.kind + "\"");
  return b;
}

/// The set a witness denotes; `level` picks one A_n (or block) when given.
template<Group G>
SpecPtr<element_t<G>> witness_set(const G &group, const Built<G> &b, const json &params)
{
  using E = element_t<G>;
  std::optional<std::size_t> level;
  if (params.is_object() && params.contains("level"))
    level = size_param(params, "level");
  if (b.sparse) {
    if (level && *level > b.sparse->n_max)
      throw spec_error("level beyond n_max");
    return spec::explicit_set<E>(level ? b.sparse->level(group, *level) : b.sparse->all(group));
  }
  if (b.rect) {
    if (level && *level > b.rect->n_max)
      throw spec_error("block beyond n_max");
    return spec::explicit_set<E>(level ? b.rect->block(group, *level) : b.rect->all(group));
  }
  if constexpr (std::is_same_v<G, FinPerm>)
    if (b.family)
      return spec::explicit_set<E>(b.family->T);
  throw spec_error("construction did not produce a witness: " + b.error);
}

template<Group G>
CheckReport witness_conditions(const Context<G> &ctx, const Built<G> &b)
{
  if (b.sparse)
    return verify_sparse_conditions(ctx, *b.sparse);
  if (b.rect)
    return verify_rect_conditions(ctx, *b.rect);
  if (b.family)
    return verify_transposition_family(*b.family);
  throw spec_error("construction did not produce a witness: " + b.error);
}

/// One configured run over a concrete group.
template<Group G>
class Runner
{
public:
  using E = element_t<G>;

  Runner(G group, const json &config, const Overrides &ov) : config_(config)
  {
    if (!config.is_object())
      throw spec_error("config must be a JSON object");
    Thresholds t = config.contains("thresholds") ? thresholds_from_json(config["thresholds"]) : Thresholds{};
    ctx_ = make_context(std::move(group), t);
    window_ = ov.window ? *ov.window : size_param(config, "window");
    if (window_ < 1)
      throw spec_error("window must be positive");
    if (ov.seed)
      seed_ = *ov.seed;
    else if (config.contains("seed"))
      seed_ = size_param(config, "seed");

    const json constructions = config.value("constructions", json::object());
    if (!constructions.is_object())
      throw spec_error("\"constructions\" must be an object");
    if (!constructions.empty() && !seed_)
      throw spec_error("a seed is required when the config builds constructions");
    std::set<std::string> cnames;
    for (const auto &[name, c] : constructions.items()) {
      if (!c.is_object() || !c.contains("kind"))
        throw spec_error("construction \"" + name + "\" needs a kind");
      cnames.insert(name);
    }
    construction_configs_ = constructions;

    subsets_ = config.value("subsets", json::object());
    if (!subsets_.is_object())
      throw spec_error("\"subsets\" must be an object");
    lookup_ = [this](const std::string &n) -> const json * {
      return subsets_.contains(n) ? &subsets_[n] : nullptr;
    };
    for (const auto &[name, j] : subsets_.items()) {
      auto s = spec_from_json(ctx_.group(), j, lookup_);
      validate_spec(ctx_.group(), s, cnames);
      specs_[name] = s;
    }
    ctx_.resolve = [this](const std::string &id, const json &params) { return resolve(id, params); };

    checks_ = config.value("checks", json::array());
    if (!checks_.is_array())
      throw spec_error("\"checks\" must be an array");
    for (const auto &c : checks_)
      validate_check(c, cnames);
  }

  RunResult run()
  {
    RunResult out;
    json results = json::array();
    std::ostringstream summary;
    bool all_matched = true;
    for (std::size_t i = 0; i < checks_.size(); ++i) {
      const auto &c = checks_[i];
      json entry;
      const std::string checker = c["checker"].get<std::string>();
      const std::string label = c.value("name", checker + "#" + std::to_string(i));
      try {
        entry = to_json(run_check(c, i));
      } catch (const construction_stalled &e) {
        entry = {{"property", checker}, {"error", e.what()}, {"condition", e.condition()}};
      } catch (const spec_error &e) {
        entry = {{"property", checker}, {"error", e.what()}};
      }
      entry["name"] = label;
      entry["checker"] = checker;
      bool matched = !entry.contains("error");
      if (c.contains("expect")) {
        entry["expected"] = c["expect"];
        matched = matched && entry.value("verdict", "") == c["expect"].get<std::string>();
      }
      entry["matched"] = matched;
      all_matched = all_matched && matched;
      summary << (matched ? "[ok]   " : "[FAIL] ") << label << ": "
              << (entry.contains("error") ? "error: " + entry["error"].get<std::string>()
                                          : entry["verdict"].get<std::string>());
      if (c.contains("expect"))
        summary << " (expected " << c["expect"].get<std::string>() << ")";
      summary << "\n";
      results.push_back(std::move(entry));
    }
    json constructions = json::object();
    for (auto &[name, b] : built_)
      constructions[name] = b.error.empty() ? json{{"kind", b.kind}} : json{{"kind", b.kind}, {"error", b.error}};
    out.report = {{"schema", kReportSchema},
                  {"timestamp", utc_timestamp()},
                  {"group", config_["group"]},
                  {"seed", seed_ ? json(*seed_) : json(nullptr)},
                  {"window", window_},
                  {"thresholds", to_json(ctx_.thresholds)},
                  {"constructions", constructions},
                  {"results", results}};
    summary << results.size() << " checks, " << (all_matched ? "all matched" : "mismatches present") << "\n";
    out.summary = summary.str();
    out.exit_code = all_matched ? kExitOk : kExitMismatch;
    return out;
  }

  /// Witness file for the named construction (built on demand).
  json witness_file(const std::string &name)
  {
    auto &b = built(name);
    if (!b.error.empty())
      throw construction_stalled(b.error, 0);
    return b.file;
  }

  const Context<G> &context() const { return ctx_; }

private:
  void validate_check(const json &c, const std::set<std::string> &cnames)
  {
    if (!c.is_object() || !c.contains("checker") || !c["checker"].is_string())
      throw spec_error("every check needs a \"checker\" name");
    auto name = c["checker"].get<std::string>();
    if (!known_checkers().count(name))
      throw spec_error("unknown checker \"" + name + "\"");
    if (c.contains("expect"))
      verdict_from_string(c["expect"].get<std::string>());
    if (c.contains("subset")) {
      auto s = c["subset"];
      if (s.is_string() && !specs_.count(s.get<std::string>()))
        throw spec_error("unknown subset \"" + s.get<std::string>() + "\"");
      if (!s.is_string())
        validate_spec(ctx_.group(), spec_from_json(ctx_.group(), s, lookup_), cnames);
    }
    if (c.contains("construction") && !cnames.count(c["construction"].get<std::string>()))
      throw spec_error("unknown construction \"" + c["construction"].get<std::string>() + "\"");
    if (c.contains("window"))
      size_param(c, "window");
    if (name == "ideal-member") {
      const json p = c.value("params", json::object());
      if (!p.contains("ideal"))
        throw spec_error("ideal-member needs params.ideal");
      for (const auto &g : ideal_from_json(ctx_.group(), p["ideal"], lookup_).generators)
        validate_spec(ctx_.group(), g, cnames);
    }
  }

  SpecPtr<E> subset_of(const json &c, const char *key = "subset")
  {
    if (!c.contains(key))
      throw spec_error(std::string("check needs \"") + key + "\"");
    const auto &s = c[key];
    if (s.is_string()) {
      auto it = specs_.find(s.get<std::string>());
      if (it == specs_.end())
        throw spec_error("unknown subset \"" + s.get<std::string>() + "\"");
      return it->second;
    }
    return spec_from_json(ctx_.group(), s, lookup_);
  }

  Built<G> &built(const std::string &name)
  {
    auto it = built_.find(name);
    if (it != built_.end())
      return it->second;
    if (!construction_configs_.contains(name))
      throw spec_error("unknown construction \"" + name + "\"");
    return built_.emplace(name, build_witness(ctx_, construction_configs_[name], *seed_)).first->second;
  }

  SpecPtr<E> resolve(const std::string &id, const json &params)
  {
    auto &b = built(id);
    if (!b.error.empty())
      throw construction_stalled(b.error, 0);
    return witness_set(ctx_.group(), b, params);
  }

  std::vector<SampleSet<G>> seeded_samples(std::size_t count, std::size_t size, std::size_t window,
                                           std::size_t item)
  {
    std::mt19937_64 rng(seed_.value_or(0) * 1000003ULL + item);
    ctx_.universe->ensure(window);
    std::vector<SampleSet<G>> out;
    for (std::size_t s = 0; s < count; ++s) {
      std::set<std::uint64_t> idx;
      while (idx.size() < std::min(size, window))
        idx.insert(rng() % window);
      out.emplace_back(ctx_.universe, window, std::vector<std::uint64_t>(idx.begin(), idx.end()));
    }
    return out;
  }

  CheckReport run_check(const json &c, std::size_t item)
  {
    const auto checker = c["checker"].get<std::string>();
    const json p = c.value("params", json::object());
    const std::size_t window = c.contains("window") ? size_param(c, "window") : window_;
    const auto &t = ctx_.thresholds;
    const G &group = ctx_.group();

    if (checker == "large")
      return check_large(ctx_, subset_of(c), window, size_param(p, "f_budget", t.f_max));
    if (checker == "small")
      return check_small(ctx_, subset_of(c), subset_of(p, "L"), window, size_param(p, "f_budget", t.f_max));
    if (checker == "thin") {
      std::optional<std::size_t> count;
      if (p.contains("translators"))
        count = size_param(p, "translators");
      return check_thin(ctx_, subset_of(c), window, count);
    }
    if (checker == "n-thin")
      return check_n_thin(ctx_, subset_of(c), size_param(p, "n"), window);
    if (checker == "stripe")
      return find_stripe(ctx_, subset_of(c), size_param(p, "n"), window);
    if (checker == "rectangle")
      return find_rectangle(ctx_, subset_of(c), size_param(p, "n"), size_param(p, "m"), window);
    if (checker == "bounded-rectangles")
      return check_bounded_rectangles(ctx_, subset_of(c), window, size_param(p, "n_max"));
    if (checker == "sparse") {
      std::vector<SampleSet<G>> samples;
      if (p.contains("X")) {
        for (const auto &x : p["X"])
          samples.push_back(materialize(x.is_string() ? subset_of(json{{"s", x}}, "s")
                                                      : spec_from_json(group, x, lookup_),
                                        ctx_, window));
      } else {
        samples = seeded_samples(size_param(p, "samples", 20), size_param(p, "sample_size", 2 * t.tau_inf),
                                 window, item);
      }
      return check_sparse(ctx_, subset_of(c), samples, window);
    }
    if (checker == "ramsey-product")
      return ramsey_product_check(ctx_, subset_of(c), materialize(subset_of(p, "X"), ctx_, window),
                                  materialize(subset_of(p, "Y"), ctx_, window));
    if (checker == "fp")
      return find_fp_prefix(ctx_, subset_of(c), size_param(p, "depth"), window);
    if (checker == "ps-fp")
      return find_ps_fp_prefix(ctx_, subset_of(c), size_param(p, "depth"), window);
    if (checker == "scattered")
      return check_scattered(ctx_, subset_of(c), size_param(p, "depth"), window);
    if (checker == "product-not-sparse")
      return demo_product_not_sparse(ctx_, subset_of(c), window);
    if (checker == "ideal-member") {
      if (!p.contains("ideal"))
        throw spec_error("ideal-member needs params.ideal");
      auto I = ideal_from_json(group, p["ideal"], lookup_);
      IdealBudget budget{size_param(p, "depth", 2), size_param(p, "fanout", 10)};
      return ideal_member(ctx_, I, subset_of(c), window, budget);
    }
    if (checker == "bounded-supt-scatter") {
      if constexpr (std::is_same_v<G, BooleanSum>)
        return bounded_supt_scatter_demo(ctx_, size_param(p, "m"), size_param(p, "depth"), window);
      else
        throw spec_error("bounded-supt-scatter needs the boolean-sum group");
    }
    if (checker == "bipartite-ramsey")
      return bipartite_ramsey(size_param(p, "n"), size_param(p, "r_max"), seed_.value_or(0));
    if (checker == "witness-conditions" || checker == "lemma31" || checker == "transposition-family") {
      if (!c.contains("construction"))
        throw spec_error(checker + " needs a \"construction\"");
      auto &b = built(c["construction"].get<std::string>());
      if (!b.error.empty())
        throw construction_stalled(b.error, 0);
      if (checker == "lemma31") {
        if (!b.sparse)
          throw spec_error("lemma31 needs a sparse construction");
        std::size_t fsize = size_param(p, "F_size", 10);
        ctx_.universe->ensure(fsize);
        std::vector<E> F(ctx_.universe->window(fsize));
        return verify_lemma31(ctx_, *b.sparse, F);
      }
      return witness_conditions(ctx_, b);
    }
    throw spec_error("unknown checker \"" + checker + "\"");
  }

  json config_;
  Context<G> ctx_;
  std::size_t window_ = 0;
  std::optional<std::uint64_t> seed_;
  json subsets_;
  json checks_;
  json construction_configs_;
  SpecRefLookup lookup_;
  std::map<std::string, SpecPtr<E>> specs_;
  std::map<std::string, Built<G>> built_;
};

inline RunResult config_error(const std::string &msg)
{
  RunResult r;
  r.exit_code = kExitConfig;
  r.summary = "config error: " + msg + "\n";
  r.report = {{"schema", kReportSchema}, {"timestamp", utc_timestamp()}, {"error", msg}};
  return r;
}

} // namespace detail

/// Runs every configured check in order. Exit code 0 iff every expected
/// verdict matched, 1 on a mismatch or a failed item, 2 on a config error.
inline RunResult run_config(const json &config, const Overrides &ov = {})
{
  try {
    if (!config.is_object() || !config.contains("group"))
      throw spec_error("config needs a \"group\"");
    auto desc = parse_group(config["group"]);
    return visit_group(desc, [&](auto group) {
      detail::Runner<decltype(group)> runner(group, config, ov);
      return runner.run();
    });
  } catch (const spec_error &e) {
    return detail::config_error(e.what());
  } catch (const json::exception &e) {
    return detail::config_error(e.what());
  }
}

/// Builds the config's "construct" entry and returns its witness file.
inline RunResult construct_from_config(const json &config, const Overrides &ov = {})
{
  try {
    if (!config.is_object() || !config.contains("group") || !config.contains("construct"))
      throw spec_error("construct needs \"group\" and \"construct\"");
    json cfg = config;
    cfg["constructions"] = {{"witness", config["construct"]}};
    if (!cfg.contains("window"))
      cfg["window"] = 1;
    auto desc = parse_group(cfg["group"]);
    return visit_group(desc, [&](auto group) {
      detail::Runner<decltype(group)> runner(group, cfg, ov);
      RunResult r;
      try {
        r.report = runner.witness_file("witness");
        r.summary = "built " + r.report["kind"].template get<std::string>() + " witness\n";
      } catch (const construction_stalled &e) {
        r.exit_code = kExitMismatch;
        r.summary = std::string("construction stalled: ") + e.what() + "\n";
        r.report = {{"schema", kReportSchema}, {"error", e.what()}};
      }
      return r;
    });
  } catch (const spec_error &e) {
    return detail::config_error(e.what());
  } catch (const json::exception &e) {
    return detail::config_error(e.what());
  }
}

/// Re-verifies a witness file without reconstructing it, then runs any
/// checks from `config` with the witness available as subset "witness".
inline RunResult verify_witness(const json &file, const json &config = json::object(), const Overrides &ov = {})
{
  try {
    if (!file.is_object() || !file.contains("group"))
      throw spec_error("witness file needs a \"group\"");
    auto desc = parse_group(file["group"]);
    return visit_group(desc, [&](auto group) {
      using G = decltype(group);
      auto built = detail::load_witness(group, file);
      json cfg = config.is_object() ? config : json::object();
      cfg["group"] = file["group"];
      if (!cfg.contains("subsets"))
        cfg["subsets"] = json::object();
      cfg["subsets"]["witness"] = spec_to_json(group, detail::witness_set(group, built, json::object()));
      if (!cfg.contains("window") && !ov.window)
        cfg["window"] = 1;
      detail::Runner<G> runner(group, cfg, ov);
      auto cond = detail::witness_conditions(runner.context(), built);
      RunResult r = runner.run();
      json entry = to_json(cond);
      entry["name"] = "witness-conditions";
      entry["checker"] = "witness-conditions";
      entry["expected"] = "holds";
      entry["matched"] = cond.holds();
      r.report["results"].insert(r.report["results"].begin(), entry);
      r.report["witness_kind"] = built.kind;
      std::string line = std::string(cond.holds() ? "[ok]   " : "[FAIL] ") + "witness-conditions: " +
                         to_string(cond.verdict);
      if (!cond.holds())
        line += " " + cond.certificate["violations"].dump();
      r.summary = line + "\n" + r.summary;
      if (!cond.holds())
        r.exit_code = kExitMismatch;
      return r;
    });
  } catch (const spec_error &e) {
    return detail::config_error(e.what());
  } catch (const json::exception &e) {
    return detail::config_error(e.what());
  }
}

/// Reads a JSON file, mapping unreadable or malformed input to spec_error.
inline json read_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw spec_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw spec_error(path + ": " + e.what());
  }
}

} // namespace subsize

#endif // SUBSIZE_RUNNER_HPP

#include "bmt/cli.hpp"

#include "bmt/distributions.hpp"
#include "bmt/errors.hpp"
#include "bmt/kernel.hpp"
#include "bmt/limits.hpp"
#include "bmt/moments.hpp"
#include "bmt/operator_model.hpp"
#include "bmt/partitions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace bmt::cli {

using nlohmann::json;

Digraph load_graph(const std::string& source, std::optional<int> n) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    std::stringstream buf;
    buf << in.rdbuf();
    return Digraph::parse_text(buf.str());
  }
  if (source.find(':') == std::string::npos) throw InvalidInput("no graph file '" + source + "'");
  return generate(FamilyTemplate::parse(source).instantiate(n));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw InvalidInput("bad integer '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw InvalidInput("bad integer '" + s + "' in list '" + text + "'");
    }
  };
  while (std::getline(in, item, ',')) {
    if (auto dots = item.find(".."); dots != std::string::npos) {
      int lo = to_int(item.substr(0, dots)), hi = to_int(item.substr(dots + 2));
      if (hi < lo) throw InvalidInput("empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(to_int(item));
    }
  }
  if (out.empty()) throw InvalidInput("empty integer list");
  return out;
}

namespace {

json number_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json rational_json(const Rational& q) {
  return json{{"num", number_json(q.get_num())}, {"den", number_json(q.get_den())}, {"decimal", to_double(q)}};
}

json moment_json(const NormalizedMoment& v) {
  if (v.is_rational()) return rational_json(v.rational());
  return json{{"raw", rational_json(v.raw)},
              {"normalization", std::to_string(v.n) + "^(" + std::to_string(v.m) + "/2)"},
              {"decimal", v.to_double()}};
}

std::string decimal(double x) {
  std::ostringstream out;
  out << std::setprecision(12) << x;
  return out.str();
}

std::string show(const Rational& q, bool as_decimal) { return as_decimal ? decimal(to_double(q)) : to_string(q); }

std::string show(const NormalizedMoment& v, bool as_decimal) {
  return as_decimal ? decimal(v.to_double()) : v.to_string();
}

enum class Format { Text, Json, Csv };

Format pick_format(const std::string& format, const std::string& out_path) {
  if (format == "json") return Format::Json;
  if (format == "csv") return Format::Csv;
  if (format == "text") return Format::Text;
  if (!format.empty()) throw InvalidInput("unknown format '" + format + "' (expected text, json, csv)");
  if (out_path.size() >= 5 && out_path.substr(out_path.size() - 5) == ".json") return Format::Json;
  if (out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".csv") return Format::Csv;
  return Format::Text;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw InvalidInput("cannot write '" + out_path + "'");
  file << text;
  out << "wrote " << out_path << "\n";
}

Site site_for(const MomentSequence& marginal, const std::string& spec, long n) {
  if (spec == "bernoulli") return Site::bernoulli();
  if (spec == "skewed") return Site::diagonal({-2.0, 0.5}, {0.2, 0.8});
  if (spec.rfind("poisson:", 0) == 0) {
    auto args = spec.substr(8);
    auto comma = args.find(',');
    return Site::poisson_bernoulli(parse_rational(args.substr(0, comma)), parse_rational(args.substr(comma + 1)).get_num().get_si());
  }
  (void)n;
  throw InvalidInput("no operator site for marginal " + marginal.name());
}

// ---------------------------------------------------------------------------

struct Options {
  std::string word, graph, family, marginal = "bernoulli", name, out, format, n_list, moments, lambda = "1", spec;
  int upto = 10, max_len = 6, n = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 20000;
  bool as_decimal = false;
};

std::string graph_source(const Options& o) {
  if (!o.graph.empty() && !o.family.empty()) throw InvalidInput("give either --graph or --family, not both");
  if (o.graph.empty() && o.family.empty()) throw InvalidInput("--graph or --family is required");
  return o.graph.empty() ? o.family : o.graph;
}

int cmd_kernel(const Options& o, std::ostream& out) {
  Word w = parse_word(o.word);
  Digraph g = load_graph(graph_source(o));
  KernelResult k = ker_g(w, g);
  Digraph rel = relabeled_ncg(k.ker, w);
  bool criterion = kernel_equality_criterion(w, g);
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  if (f == Format::Json) {
    json j{{"word", w},
           {"ker", k.ker.to_set_notation()},
           {"ker_g", k.ker_g.to_set_notation()},
           {"equal", k.equal},
           {"criterion", criterion},
           {"relabeled_ncg", rel.to_text()}};
    text << j.dump(2) << "\n";
  } else {
    text << "word: " << to_string(w) << "\n"
         << "ker: " << k.ker.to_set_notation() << "\n"
         << "ker_G: " << k.ker_g.to_set_notation() << "\n"
         << "equal=" << (k.equal ? "true" : "false") << "\n"
         << "criterion=" << (criterion ? "true" : "false") << "\n"
         << "relabeled nesting-crossing graph:\n"
         << rel.to_text();
  }
  emit(text.str(), o.out, out);
  return 0;
}

int cmd_moment(const Options& o, std::ostream& out) {
  Word w = parse_word(o.word);
  Digraph g = load_graph(graph_source(o));
  BmtEnsemble e(g, parse_marginal(o.marginal));
  Rational value = mixed_moment(e, w);
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  std::string kg = w.empty() ? "{}" : ker_g(w, g).ker_g.to_set_notation();
  if (f == Format::Json) {
    text << json{{"word", w}, {"marginal", e.marginal(g.vertices().front()).name()}, {"ker_g", kg},
                 {"moment", rational_json(value)}}
                .dump(2)
         << "\n";
  } else {
    text << "moment: " << show(value, o.as_decimal) << "\n" << "ker_G: " << kg << "\n";
  }
  emit(text.str(), o.out, out);
  return 0;
}

int cmd_law(const Options& o, std::ostream& out) {
  ReferenceLaw law = ReferenceLaw::parse(o.name, parse_rational(o.lambda));
  if (o.upto < 0) throw InvalidInput("--upto must be non-negative");
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  if (f == Format::Json) {
    json moments = json::array();
    for (int k = 0; k <= o.upto; ++k) moments.push_back(json{{"k", k}, {"moment", rational_json(reference_moment(law, k))}});
    text << json{{"law", law.name()}, {"moments", moments}}.dump(2) << "\n";
  } else if (f == Format::Csv) {
    text << "k,moment\n";
    for (int k = 0; k <= o.upto; ++k) text << k << "," << show(reference_moment(law, k), o.as_decimal) << "\n";
  } else {
    text << "law: " << law.name() << "\n";
    for (int k = 0; k <= o.upto; ++k) text << "m" << k << " = " << show(reference_moment(law, k), o.as_decimal) << "\n";
  }
  emit(text.str(), o.out, out);
  return 0;
}

int cmd_operator_verify(const Options& o, std::ostream& out) {
  Digraph g = load_graph(graph_source(o));
  MomentSequence marginal = parse_marginal(o.marginal);
  std::vector<Site> sites(g.num_vertices(), site_for(marginal, o.marginal, static_cast<long>(g.num_vertices())));
  OperatorModel model = OperatorModel::build(g, sites);
  BmtEnsemble e(g, marginal);
  VerifyReport r = verify_bmt(model, e, o.max_len, o.seed, o.samples);
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  if (f == Format::Json) {
    text << json{{"checked", r.checked}, {"violations", r.violations}, {"max_deviation", r.max_deviation},
                 {"exhaustive", r.exhaustive}, {"examples", r.examples}, {"dimension", model.dimension()}}
                .dump(2)
         << "\n";
  } else {
    text << "dimension: " << model.dimension() << "\n"
         << "words checked: " << r.checked << (r.exhaustive ? " (exhaustive)" : " (sampled)") << "\n"
         << "violations: " << r.violations << "\n"
         << "max deviation: " << r.max_deviation << "\n";
    for (const auto& ex : r.examples) text << "  " << ex << "\n";
  }
  emit(text.str(), o.out, out);
  return r.ok() ? 0 : 1;
}

int cmd_clt(const Options& o, std::ostream& out) {
  if (o.family.empty()) throw InvalidInput("--family is required");
  CltConfig config{FamilyTemplate::parse(o.family), parse_marginal(o.marginal), parse_int_list(o.moments),
                   parse_int_list(o.n_list)};
  MomentTable t = clt_gap_decay(config);
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  if (f == Format::Json) {
    json rows = json::array();
    for (const MomentRow& r : t.rows) {
      json row{{"N", r.n}, {"vertices", r.vertices}, {"m", r.m}, {"exact", moment_json(r.exact)},
               {"leading", rational_json(r.leading)}, {"gap_leading", r.gap_leading}};
      row["reference"] = r.reference ? rational_json(*r.reference) : json(nullptr);
      row["gap_reference"] = r.gap_reference ? json(*r.gap_reference) : json(nullptr);
      rows.push_back(row);
    }
    json fitted = json::object(), decreasing = json::object();
    for (auto [m, c] : t.fitted_c) fitted[std::to_string(m)] = c;
    for (auto [m, d] : t.reference_gap_decreasing) decreasing[std::to_string(m)] = d;
    text << json{{"family", t.family}, {"marginal", t.marginal}, {"rows", rows}, {"fitted_c", fitted},
                 {"reference_gap_decreasing", decreasing}}
                .dump(2)
         << "\n";
  } else if (f == Format::Csv) {
    text << "N,vertices,m,exact,leading,reference,gap_leading,gap_reference\n";
    for (const MomentRow& r : t.rows) {
      text << r.n << "," << r.vertices << "," << r.m << "," << show(r.exact, o.as_decimal) << ","
           << show(r.leading, o.as_decimal) << "," << (r.reference ? show(*r.reference, o.as_decimal) : "") << ","
           << decimal(r.gap_leading) << "," << (r.gap_reference ? decimal(*r.gap_reference) : "") << "\n";
    }
  } else {
    text << "family: " << t.family << "  marginal: " << t.marginal << "\n";
    text << std::left << std::setw(6) << "N" << std::setw(4) << "m" << std::setw(24) << "exact" << std::setw(20)
         << "leading" << std::setw(12) << "reference" << "gap\n";
    for (const MomentRow& r : t.rows) {
      text << std::setw(6) << r.n << std::setw(4) << r.m << std::setw(24) << show(r.exact, o.as_decimal)
           << std::setw(20) << show(r.leading, o.as_decimal) << std::setw(12)
           << (r.reference ? show(*r.reference, o.as_decimal) : "-")
           << (r.gap_reference ? decimal(*r.gap_reference) : "-") << "\n";
    }
    for (auto [m, c] : t.fitted_c) {
      text << "m=" << m << ": fitted C = " << decimal(c)
           << ", reference gap decreasing = " << (t.reference_gap_decreasing[m] ? "yes" : "no") << "\n";
    }
  }
  emit(text.str(), o.out, out);
  return 0;
}

int cmd_poisson(const Options& o, std::ostream& out) {
  if (o.family.empty()) throw InvalidInput("--family is required");
  Rational lambda = parse_rational(o.lambda);
  auto rows = poisson_table(FamilyTemplate::parse(o.family), lambda, parse_int_list(o.moments), parse_int_list(o.n_list));
  Format f = pick_format(o.format, o.out);
  std::ostringstream text;
  if (f == Format::Json) {
    json arr = json::array();
    for (const PoissonRow& r : rows) {
      json row{{"N", r.n}, {"vertices", r.vertices}, {"m", r.m}, {"exact", rational_json(r.value.exact)},
               {"leading", rational_json(r.value.leading)}, {"envelope", rational_json(r.value.envelope)}};
      row["reference"] = r.reference ? rational_json(*r.reference) : json(nullptr);
      arr.push_back(row);
    }
    text << json{{"family", o.family}, {"lambda", rational_json(lambda)}, {"rows", arr}}.dump(2) << "\n";
  } else if (f == Format::Csv) {
    text << "N,vertices,m,exact,leading,envelope,reference\n";
    for (const PoissonRow& r : rows) {
      text << r.n << "," << r.vertices << "," << r.m << "," << show(r.value.exact, o.as_decimal) << ","
           << show(r.value.leading, o.as_decimal) << "," << show(r.value.envelope, o.as_decimal) << ","
           << (r.reference ? show(*r.reference, o.as_decimal) : "") << "\n";
    }
  } else {
    text << "family: " << o.family << "  lambda: " << to_string(lambda) << "\n";
    text << std::left << std::setw(6) << "N" << std::setw(4) << "m" << std::setw(28) << "exact" << std::setw(28)
         << "leading" << std::setw(20) << "envelope" << "reference\n";
    for (const PoissonRow& r : rows) {
      text << std::setw(6) << r.n << std::setw(4) << r.m << std::setw(28) << show(r.value.exact, o.as_decimal)
           << std::setw(28) << show(r.value.leading, o.as_decimal) << std::setw(20)
           << show(r.value.envelope, o.as_decimal) << (r.reference ? show(*r.reference, o.as_decimal) : "-") << "\n";
    }
  }
  emit(text.str(), o.out, out);
  return 0;
}

int cmd_graph_gen(const Options& o, std::ostream& out) {
  FamilyTemplate t = FamilyTemplate::parse(o.spec);
  std::optional<int> n;
  if (o.n > 0) n = o.n;
  emit(generate(t.instantiate(n)).to_text(), o.out, out);
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// selftest

bool selftest(std::ostream& out) {
  bool all = true;
  auto report = [&](const std::string& name, bool ok, std::size_t checked) {
    out << (ok ? "PASS " : "FAIL ") << name << " (" << checked << " cases)\n";
    all = all && ok;
  };

  {
    // Bell numbers via the Bell triangle.
    std::vector<Integer> row{1};
    bool ok = true;
    std::size_t n = 0;
    for (int m = 1; m <= 8; ++m) {
      std::vector<Integer> next{row.back()};
      for (const Integer& x : row) next.push_back(next.back() + x);
      ok = ok && Integer(static_cast<long>(enumerate(m, PartitionClass::All).size())) == row.back();
      row = std::move(next);
      ++n;
    }
    report("partition counts match Bell numbers for m<=8", ok, n);
  }
  {
    bool ok = true;
    std::size_t n = 0;
    for (int m = 1; m <= 6; ++m) {
      for (const Partition& p : enumerate(m, PartitionClass::All)) {
        Digraph g = nesting_crossing_graph(p);
        const auto& bs = p.blocks();
        for (std::size_t i = 0; i < bs.size(); ++i) {
          for (std::size_t j = 0; j < bs.size(); ++j) {
            if (i == j) continue;
            bool by_def = nested(bs[i], bs[j]) || crossing(bs[i], bs[j]);
            ok = ok && by_def == g.has_edge(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
            ++n;
          }
        }
      }
    }
    report("nesting-crossing graph formulations agree for m<=6", ok, n);
  }
  {
    bool refine = true, lemma = true, singleton = true, oracle = true, indicator = true;
    std::size_t n = 0;
    for (const Digraph& g : all_digraphs_on(3)) {
      BmtEnsemble e(g, centered_bernoulli());
      OperatorModel model = OperatorModel::build(g, std::vector<Site>(3, Site::bernoulli()));
      std::vector<Word> frontier{Word{}};
      for (int len = 1; len <= 5; ++len) {
        std::vector<Word> next;
        for (const Word& w : frontier) {
          for (Vertex v = 1; v <= 3; ++v) {
            Word x = w;
            x.push_back(v);
            KernelResult k = ker_g(x, g);
            refine = refine && is_refinement(k.ker_g, k.ker);
            lemma = lemma && k.equal == kernel_equality_criterion(x, g);
            Rational mm = mixed_moment(e, x);
            if (k.ker.has_singleton()) singleton = singleton && mm == 0;
            if (k.ker.is_pairing()) indicator = indicator && mm == pair_partition_moment_is_indicator(e, x);
            oracle = oracle && std::abs(model.state_moment(x) - to_double(mm)) <= kOracleTolerance;
            ++n;
            next.push_back(std::move(x));
          }
        }
        frontier = std::move(next);
      }
    }
    report("ker_G refines ker (all 3-vertex digraphs, words <= 5)", refine, n);
    report("kernel equality criterion matches ker_G == ker", lemma, n);
    report("singleton condition", singleton, n);
    report("pair partitions give the subgraph indicator", indicator, n);
    report("operator model agrees with mixed moments", oracle, n);
  }
  {
    bool ok = true;
    std::size_t n = 0;
    for (int k = 1; k <= 6; ++k) {
      ok = ok && reference_moment({LawKind::Arcsine}, 2 * k) == ratio(binomial(2 * k, k), pow(Integer(2), k));
      ++n;
    }
    report("arcsine moments match (2k choose k)/2^k", ok, n);
  }
  {
    bool ok = true;
    std::size_t n = 0;
    for (const Digraph& g : all_digraphs_on(3)) {
      for (int m = 1; m <= 4; ++m) {
        ok = ok && exact_sum_moment(g, skewed_law(), m).raw == exact_sum_moment_naive(g, skewed_law(), m).raw;
        ++n;
      }
    }
    report("kernel-class sum equals naive sum (3 vertices, m <= 4)", ok, n);
  }
  out << (all ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
  return all;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed moments of Boolean/monotone/tensor independent variables over a digraph", "bmt"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write the result to a file");
    sub->add_option("--format", o.format, "text, json or csv (default: from --out extension, else text)");
    sub->add_flag("--decimal", o.as_decimal, "Print decimals instead of exact rationals");
  };
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph, "Graph file or family spec such as complete:5");
    sub->add_option("--family", o.family, "Family spec such as turan:10,3");
  };

  auto* kernel = app.add_subcommand("kernel", "Kernel, subordinated kernel and relabeled nesting-crossing graph");
  kernel->add_option("--word", o.word, "Comma-separated letters")->required();
  add_graph(kernel);
  add_format(kernel);

  auto* moment = app.add_subcommand("moment", "Exact mixed moment of a word");
  moment->add_option("--word", o.word, "Comma-separated letters")->required();
  moment->add_option("--marginal", o.marginal, "bernoulli, skewed or poisson:LAMBDA,N");
  add_graph(moment);
  add_format(moment);

  auto* law = app.add_subcommand("law", "Moments of a reference law");
  law->add_option("--name", o.name, "bernoulli, gaussian, arcsine, poisson, boolean-poisson, monotone-poisson")->required();
  law->add_option("--upto", o.upto, "Highest moment order");
  law->add_option("--lambda", o.lambda, "Poisson rate");
  add_format(law);

  auto* opv = app.add_subcommand("operator-verify", "Compare the tensor operator model with the moment engine");
  add_graph(opv);
  opv->add_option("--max-len", o.max_len, "Longest word");
  opv->add_option("--seed", o.seed, "Seed for sampled words");
  opv->add_option("--samples", o.samples, "Number of sampled words when not exhaustive");
  opv->add_option("--marginal", o.marginal, "bernoulli, skewed or poisson:LAMBDA,N");
  add_format(opv);

  auto* clt = app.add_subcommand("clt", "Exact central limit moment tables");
  clt->add_option("--family", o.family, "Family spec using N, e.g. turan:N,3")->required();
  clt->add_option("--N", o.n_list, "Values of N, e.g. 4,8,16")->required();
  clt->add_option("--moments", o.moments, "Moment orders, e.g. 2,4,6 or 1..4")->required();
  clt->add_option("--marginal", o.marginal, "bernoulli or skewed");
  add_format(clt);

  auto* poisson = app.add_subcommand("poisson", "Exact Poisson limit moment tables");
  poisson->add_option("--family", o.family, "Family spec using N, e.g. complete:N")->required();
  poisson->add_option("--lambda", o.lambda, "Rate");
  poisson->add_option("--N", o.n_list, "Values of N")->required();
  poisson->add_option("--moments", o.moments, "Moment orders, e.g. 1..4")->required();
  add_format(poisson);

  auto* gen = app.add_subcommand("graph-gen", "Print a generated graph in the text format");
  gen->add_option("spec", o.spec, "Family spec, e.g. counterexample:3")->required();
  gen->add_option("--N", o.n, "Value for N in the spec");
  gen->add_option("--out", o.out, "Write to a file");

  auto* self = app.add_subcommand("selftest", "Run the small-universe invariant checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return 1;
  }

  try {
    if (kernel->parsed()) return cmd_kernel(o, out);
    if (moment->parsed()) return cmd_moment(o, out);
    if (law->parsed()) return cmd_law(o, out);
    if (opv->parsed()) return cmd_operator_verify(o, out);
    if (clt->parsed()) return cmd_clt(o, out);
    if (poisson->parsed()) return cmd_poisson(o, out);
    if (gen->parsed()) return cmd_graph_gen(o, out);
    if (self->parsed()) return selftest(out) ? 0 : 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace bmt::cli

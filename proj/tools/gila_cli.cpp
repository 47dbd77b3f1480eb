// Command-line front end. Talks to the library only through gila.h.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gila/gila.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kMetricMismatch = 3 };

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("GILA_LOG");
  if (!env) return LogLevel::Info;
  const std::string v = env;
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

void info(const std::string& msg) {
  if (log_level() != LogLevel::Quiet) std::cerr << msg << '\n';
}

// Thrown to leave a subcommand with a specific exit code.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail_with(int code, const std::string& msg) { throw Failure{code, msg}; }

void check(gila_status st, const std::string& what, int code = kFailure) {
  if (st != GILA_OK) fail_with(code, what + ": " + gila_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<gila_graph, Deleter<gila_graph, gila_graph_free>>;
using LayoutPtr = std::unique_ptr<gila_layout, Deleter<gila_layout, gila_layout_free>>;
using ClustersPtr = std::unique_ptr<gila_clusters, Deleter<gila_clusters, gila_clusters_free>>;
using PartitionPtr = std::unique_ptr<gila_partition, Deleter<gila_partition, gila_partition_free>>;

struct CString {
  char* p = nullptr;
  ~CString() { gila_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_with(kFailure, "cannot write " + path.string());
  out << text;
  if (!out) fail_with(kFailure, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Graph source: a file or a generator spec.

struct GraphSource {
  std::string input;
  std::string model = "er";
  std::uint64_t edges = 10000;
  double density = 2.5;
  std::uint64_t graph_seed = 1;

  void add_options(CLI::App* app, bool required_input) {
    auto* opt = app->add_option("-i,--input", input, "edge-list file");
    if (required_input) {
      opt->required();
      return;
    }
    app->add_option("--model", model, "generator model when no --input is given")
        ->check(CLI::IsMember({"er", "ba"}));
    app->add_option("--edges", edges, "generator edge count")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    app->add_option("--density", density, "generator edges per vertex")->check(CLI::Range(2.0, 3.0));
    app->add_option("--graph-seed", graph_seed, "generator seed");
  }

  gila_generator_options generator() const {
    gila_generator_options g;
    gila_generator_options_default(&g);
    g.model = model == "ba" ? GILA_MODEL_BARABASI_ALBERT : GILA_MODEL_ERDOS_RENYI;
    g.target_edges = edges;
    g.density = density;
    g.seed = graph_seed;
    return g;
  }

  GraphPtr load() const {
    gila_graph* g = nullptr;
    if (!input.empty()) {
      check(gila_graph_load(input.c_str(), &g), "stage input");
    } else {
      const auto opts = generator();
      check(gila_graph_generate(&opts, &g), "stage generate");
    }
    return GraphPtr(g);
  }

  json to_json() const {
    if (!input.empty()) return {{"path", input}};
    return {{"generator", {{"model", model}, {"edges", edges}, {"density", density}, {"seed", graph_seed}}}};
  }

  static GraphSource from_json(const json& j) {
    GraphSource s;
    if (j.contains("path")) {
      s.input = j.at("path").get<std::string>();
    } else {
      const auto& g = j.at("generator");
      s.model = g.at("model").get<std::string>();
      s.edges = g.at("edges").get<std::uint64_t>();
      s.density = g.at("density").get<double>();
      s.graph_seed = g.at("seed").get<std::uint64_t>();
    }
    return s;
  }

  std::string label() const {
    if (!input.empty()) return fs::path(input).stem().string();
    return model + "-m" + std::to_string(edges) + "-s" + std::to_string(graph_seed);
  }
};

// ---------------------------------------------------------------------------
// Layout options shared by layout and bench.

struct LayoutFlags {
  gila_layout_options opts{};
  std::string mode = "fr";
  std::string frame = "1200x1200";

  LayoutFlags() { gila_layout_options_default(&opts); }

  void add_options(CLI::App* app) {
    app->add_option("--k", opts.k, "TTL of position messages (repulsion radius in hops)")
        ->check(CLI::Range(1u, 64u));
    app->add_option("--workers", opts.workers, "engine worker threads")->check(CLI::Range(1u, 1024u));
    app->add_option("--mode", mode, "force model")->check(CLI::IsMember({"fr", "linlog"}));
    app->add_option("--max-iterations", opts.max_iterations, "drawing iteration limit")
        ->check(CLI::Range(1u, 1000000u));
    app->add_option("--seed", opts.seed, "placement and engine seed");
    app->add_option("--partitions", opts.partitions, "Spinner partitions (0: one per worker)");
    app->add_option("--capacity-factor", opts.capacity_factor, "Spinner capacity factor")
        ->check(CLI::Range(1.0, 100.0));
    app->add_option("--partition-seed", opts.partition_seed, "Spinner seed");
    app->add_option("--frame", frame, "initial frame, WxH");
  }

  // Folds string flags into opts; usage errors exit 2 before any work.
  void finalize() {
    opts.mode = mode == "linlog" ? GILA_MODE_LINLOG : GILA_MODE_FR;
    const auto x = frame.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument("frame");
      std::size_t used = 0;
      opts.frame_width = std::stod(frame.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("frame");
      const auto h = frame.substr(x + 1);
      opts.frame_height = std::stod(h, &used);
      if (used != h.size()) throw std::invalid_argument("frame");
    } catch (const std::exception&) {
      fail_with(kUsage, "--frame expects WxH, got '" + frame + "'");
    }
    if (gila_layout_options_validate(&opts) != GILA_OK) fail_with(kUsage, gila_last_error());
  }
};

json options_to_json(const gila_layout_options& o) {
  return {{"force",
           {{"mode", o.mode == GILA_MODE_LINLOG ? "linlog" : "fr"},
            {"k", o.k},
            {"ns", o.ns},
            {"nh", o.nh},
            {"nw", o.nw},
            {"frame_width", o.frame_width},
            {"frame_height", o.frame_height},
            {"cool_base", o.cool_base},
            {"conv_threshold", o.conv_threshold},
            {"conv_fraction", o.conv_fraction},
            {"max_iterations", o.max_iterations},
            {"seed", o.seed},
            {"rho", o.rho}}},
          {"spinner",
           {{"partitions", o.partitions},
            {"capacity_factor", o.capacity_factor},
            {"max_iterations", o.partition_max_iterations},
            {"seed", o.partition_seed}}},
          {"run", {{"workers", o.workers}, {"message_cap", o.message_cap}, {"timeout_seconds", o.timeout_seconds}}}};
}

gila_layout_options options_from_json(const json& j) {
  gila_layout_options o;
  gila_layout_options_default(&o);
  const auto& f = j.at("force");
  o.mode = f.at("mode").get<std::string>() == "linlog" ? GILA_MODE_LINLOG : GILA_MODE_FR;
  o.k = f.at("k");
  o.ns = f.at("ns");
  o.nh = f.at("nh");
  o.nw = f.at("nw");
  o.frame_width = f.at("frame_width");
  o.frame_height = f.at("frame_height");
  o.cool_base = f.at("cool_base");
  o.conv_threshold = f.at("conv_threshold");
  o.conv_fraction = f.at("conv_fraction");
  o.max_iterations = f.at("max_iterations");
  o.seed = f.at("seed");
  o.rho = f.at("rho");
  const auto& s = j.at("spinner");
  o.partitions = s.at("partitions");
  o.capacity_factor = s.at("capacity_factor");
  o.partition_max_iterations = s.at("max_iterations");
  o.partition_seed = s.at("seed");
  const auto& r = j.at("run");
  o.workers = r.at("workers");
  o.message_cap = r.at("message_cap");
  o.timeout_seconds = r.at("timeout_seconds");
  return o;
}

json render_to_json(const gila_render_options& r) {
  return {{"vertex_radius", r.vertex_radius},
          {"edge_width", r.edge_width},
          {"width", r.width},
          {"height", r.height},
          {"draw_edges", r.draw_edges != 0}};
}

void add_render_options(CLI::App* app, gila_render_options& r) {
  app->add_option("--width", r.width, "SVG width")->check(CLI::PositiveNumber);
  app->add_option("--height", r.height, "SVG height")->check(CLI::PositiveNumber);
  app->add_option("--vertex-radius", r.vertex_radius, "vertex radius")->check(CLI::NonNegativeNumber);
  app->add_option("--edge-width", r.edge_width, "edge stroke width")->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------------------
// layout / replay

struct LayoutJob {
  GraphSource source;
  LayoutFlags flags;
  gila_render_options render{};
  std::string output;
  std::string svg;
  bool cluster = false;
  std::string clusters_out;
  std::uint64_t cluster_seed = 1;
  std::string manifest;
  double timeout = 0.0;

  LayoutJob() { gila_render_options_default(&render); }
};

std::string default_coords_path(const GraphSource& src) {
  if (!src.input.empty()) return fs::path(src.input).replace_extension(".coords").string();
  return src.label() + ".coords";
}

int run_layout_job(LayoutJob job, const std::string& command) {
  job.flags.opts.timeout_seconds = job.timeout;
  job.flags.opts.verbose = log_level() == LogLevel::Debug ? 1 : 0;
  if (job.output.empty()) job.output = default_coords_path(job.source);
  if (job.cluster && job.clusters_out.empty())
    job.clusters_out = fs::path(job.output).replace_extension(".clusters").string();
  if (job.manifest.empty()) job.manifest = job.output + ".manifest.json";

  const std::string started = now_iso();
  const auto t0 = std::chrono::steady_clock::now();
  auto graph = job.source.load();
  info("graph: n=" + std::to_string(gila_graph_vertex_count(graph.get())) +
       " m=" + std::to_string(gila_graph_edge_count(graph.get())));

  gila_layout* raw = nullptr;
  check(gila_layout_run(graph.get(), &job.flags.opts, &raw), "layout failed");
  LayoutPtr layout(raw);
  check(gila_layout_save(layout.get(), job.output.c_str()), "stage output");

  gila_layout_info li{};
  check(gila_layout_get_info(layout.get(), &li), "stage output");
  info("layout: iterations=" + std::to_string(li.iterations) + " supersteps=" + std::to_string(li.supersteps) +
       " converged=" + std::to_string(li.converged) + " -> " + job.output);

  ClustersPtr clusters;
  json cluster_info = nullptr;
  if (job.cluster) {
    gila_clusters* c = nullptr;
    check(gila_cluster_select(graph.get(), layout.get(), job.cluster_seed, &c), "stage clustering");
    clusters.reset(c);
    check(gila_clusters_save(c, graph.get(), job.clusters_out.c_str()), "stage clustering");
    gila_cluster_quality q{};
    check(gila_clusters_quality(c, graph.get(), &q), "stage clustering");
    cluster_info = {{"k", gila_clusters_k(c)},
                    {"seed", job.cluster_seed},
                    {"performance", q.performance},
                    {"coverage", q.coverage},
                    {"conductance", q.conductance},
                    {"modularity", q.modularity}};
    info("clusters: k=" + std::to_string(gila_clusters_k(c)) + " -> " + job.clusters_out);
  }
  if (!job.svg.empty()) {
    CString text;
    check(gila_render_svg(graph.get(), layout.get(), clusters.get(), &job.render, &text.p), "stage render");
    write_text(job.svg, text.str());
    info("svg -> " + job.svg);
  }

  json stages = json::array();
  for (std::size_t i = 0; i < gila_layout_stage_count(layout.get()); ++i) {
    const char* name = nullptr;
    double seconds = 0;
    gila_layout_stage(layout.get(), i, &name, &seconds);
    stages.push_back({{"stage", name}, {"seconds", seconds}});
  }
  json m = options_to_json(job.flags.opts);
  m["version"] = gila_version();
  m["command"] = command;
  m["input"] = job.source.to_json();
  m["render"] = render_to_json(job.render);
  m["cluster"] = job.cluster ? json{{"enabled", true}, {"seed", job.cluster_seed}} : json{{"enabled", false}};
  m["outputs"] = {{"coords", job.output}, {"svg", job.svg}, {"clusters", job.cluster ? job.clusters_out : ""}};
  m["started"] = started;
  m["finished"] = now_iso();
  m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m["stages"] = stages;
  m["result"] = {{"iterations", li.iterations},
                 {"supersteps", li.supersteps},
                 {"total_messages", li.total_messages},
                 {"peak_messages", li.peak_messages},
                 {"message_cap", li.message_cap},
                 {"converged", li.converged != 0},
                 {"partition_iterations", li.partition_iterations},
                 {"partition_edge_cut", li.partition_edge_cut}};
  if (!cluster_info.is_null()) m["result"]["clusters"] = cluster_info;
  write_text(job.manifest, m.dump(2) + "\n");
  return kOk;
}

LayoutJob job_from_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail_with(kUsage, "cannot open manifest " + path.string());
  json m;
  try {
    in >> m;
    LayoutJob job;
    job.source = GraphSource::from_json(m.at("input"));
    job.flags.opts = options_from_json(m);
    job.timeout = job.flags.opts.timeout_seconds;
    const auto& r = m.at("render");
    job.render.vertex_radius = r.at("vertex_radius");
    job.render.edge_width = r.at("edge_width");
    job.render.width = r.at("width");
    job.render.height = r.at("height");
    job.render.draw_edges = r.at("draw_edges").get<bool>() ? 1 : 0;
    job.cluster = m.at("cluster").at("enabled").get<bool>();
    if (job.cluster) job.cluster_seed = m.at("cluster").at("seed");
    job.output = m.at("outputs").at("coords");
    job.svg = m.at("outputs").at("svg");
    job.clusters_out = m.at("outputs").at("clusters");
    return job;
  } catch (const json::exception& e) {
    fail_with(kUsage, "malformed manifest " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsJob {
  std::string input;
  std::string coords;
  std::string csv;
};

void append_csv(const fs::path& path, const std::string& header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) fail_with(kFailure, "cannot append to " + path.string());
  if (fresh) out << header << '\n';
  out << row << '\n';
}

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int run_metrics(const MetricsJob& job) {
  gila_graph* g = nullptr;
  check(gila_graph_load(job.input.c_str(), &g), "stage input");
  GraphPtr graph(g);
  gila_layout* l = nullptr;
  check(gila_layout_load(job.coords.c_str(), &l), "stage coords", kMetricMismatch);
  LayoutPtr layout(l);
  gila_quality_report r{};
  const gila_status st = gila_quality(graph.get(), layout.get(), &r);
  if (st == GILA_ERR_MISMATCH || st == GILA_ERR_LOOKUP)
    fail_with(kMetricMismatch, std::string("vertex sets differ: ") + gila_last_error());
  check(st, "stage metrics");
  std::cout << "crossings=" << r.crossings << '\n'
            << "CRE=" << fixed(r.cre) << '\n'
            << "ELD=" << fixed(r.eld) << '\n'
            << "SIM_raw=" << fixed(r.sim_raw) << '\n';
  if (!job.csv.empty()) {
    append_csv(job.csv, "graph,coords,n,m,crossings,CRE,ELD,SIM_raw",
               job.input + "," + job.coords + "," + std::to_string(gila_graph_vertex_count(graph.get())) + "," +
                   std::to_string(gila_graph_edge_count(graph.get())) + "," + std::to_string(r.crossings) + "," +
                   fixed(r.cre) + "," + fixed(r.eld) + "," + fixed(r.sim_raw));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchJob {
  std::string spec;
  std::string csv;
  double timeout = 300.0;
};

int run_bench(const BenchJob& job) {
  std::ifstream in(job.spec);
  if (!in) fail_with(kUsage, "cannot open bench spec " + job.spec);
  json spec;
  std::vector<GraphSource> graphs;
  std::vector<std::uint32_t> ks, workers;
  std::vector<std::uint64_t> seeds;
  LayoutFlags base;
  try {
    in >> spec;
    for (const auto& g : spec.at("graphs")) graphs.push_back(GraphSource::from_json(g));
    ks = spec.value("k", std::vector<std::uint32_t>{2});
    workers = spec.value("workers", std::vector<std::uint32_t>{1});
    seeds = spec.value("seeds", std::vector<std::uint64_t>{1});
    base.mode = spec.value("mode", std::string("fr"));
    if (spec.contains("max_iterations")) base.opts.max_iterations = spec.at("max_iterations");
  } catch (const json::exception& e) {
    fail_with(kUsage, "malformed bench spec: " + std::string(e.what()));
  }
  if (graphs.empty() || ks.empty() || workers.empty() || seeds.empty())
    fail_with(kUsage, "bench spec needs non-empty graphs, k, workers and seeds");
  base.finalize();
  for (auto k : ks) {
    auto o = base.opts;
    o.k = k;
    if (gila_layout_options_validate(&o) != GILA_OK) fail_with(kUsage, gila_last_error());
  }
  for (auto w : workers)
    if (w == 0) fail_with(kUsage, "workers must be at least 1");

  std::ofstream out(job.csv);
  if (!out) fail_with(kFailure, "cannot write " + job.csv);
  out << "graph,n,m,k,workers,seed,supersteps,wall_time,CRE,ELD,SIM_raw\n";
  for (const auto& src : graphs) {
    GraphPtr graph;
    try {
      graph = src.load();
    } catch (const Failure& f) {
      std::cerr << f.message << '\n';
    }
    const std::string n = graph ? std::to_string(gila_graph_vertex_count(graph.get())) : "*";
    const std::string m = graph ? std::to_string(gila_graph_edge_count(graph.get())) : "*";
    for (auto k : ks)
      for (auto w : workers)
        for (auto seed : seeds) {
          const std::string key = src.label() + "," + n + "," + m + "," + std::to_string(k) + "," +
                                  std::to_string(w) + "," + std::to_string(seed);
          if (!graph) {
            out << key << ",*,*,*,*,*\n";
            continue;
          }
          auto o = base.opts;
          o.k = k;
          o.workers = w;
          o.seed = seed;
          o.timeout_seconds = job.timeout;
          o.verbose = log_level() == LogLevel::Debug ? 1 : 0;
          const auto t0 = std::chrono::steady_clock::now();
          gila_layout* l = nullptr;
          const gila_status st = gila_layout_run(graph.get(), &o, &l);
          const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          if (st != GILA_OK) {
            info("cell " + key + ": " + gila_status_name(st) + ": " + gila_last_error());
            out << key << ",*,*,*,*,*\n";
            out.flush();
            continue;
          }
          LayoutPtr layout(l);
          gila_layout_info li{};
          gila_layout_get_info(l, &li);
          gila_quality_report r{};
          if (gila_quality(graph.get(), l, &r) != GILA_OK) {
            info("cell " + key + ": metrics failed: " + gila_last_error());
            out << key << "," << li.supersteps << "," << fixed(wall, 3) << ",*,*,*\n";
            continue;
          }
          out << key << "," << li.supersteps << "," << fixed(wall, 3) << "," << fixed(r.cre) << ","
              << fixed(r.eld) << "," << fixed(r.sim_raw) << "\n";
          out.flush();
          info("cell " + key + ": done in " + fixed(wall, 2) + " s");
        }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// cluster / render / partition / generate

struct ClusterJob {
  std::string input;
  std::string coords;
  std::string output;
  std::string svg;
  std::uint32_t k = 0;
  std::uint64_t seed = 1;
  gila_render_options render{};
  ClusterJob() { gila_render_options_default(&render); }
};

int run_cluster(const ClusterJob& job) {
  gila_graph* g = nullptr;
  check(gila_graph_load(job.input.c_str(), &g), "stage input");
  GraphPtr graph(g);
  gila_layout* l = nullptr;
  check(gila_layout_load(job.coords.c_str(), &l), "stage coords", kMetricMismatch);
  LayoutPtr layout(l);
  gila_clusters* c = nullptr;
  if (job.k > 0)
    check(gila_cluster_kmeans(graph.get(), l, job.k, job.seed, &c), "stage clustering");
  else
    check(gila_cluster_select(graph.get(), l, job.seed, &c), "stage clustering");
  ClustersPtr clusters(c);
  const std::string out = job.output.empty() ? fs::path(job.coords).replace_extension(".clusters").string() : job.output;
  check(gila_clusters_save(c, graph.get(), out.c_str()), "stage output");
  gila_cluster_quality q{};
  check(gila_clusters_quality(c, graph.get(), &q), "stage quality");
  std::cout << "k=" << gila_clusters_k(c) << '\n'
            << "performance=" << fixed(q.performance) << '\n'
            << "coverage=" << fixed(q.coverage) << '\n'
            << "conductance=" << fixed(q.conductance) << '\n'
            << "modularity=" << fixed(q.modularity) << '\n';
  if (!job.svg.empty()) {
    CString text;
    check(gila_render_svg(graph.get(), l, c, &job.render, &text.p), "stage render");
    write_text(job.svg, text.str());
  }
  return kOk;
}

struct RenderJob {
  std::string input;
  std::string coords;
  std::string svg;
  bool cluster = false;
  std::uint64_t seed = 1;
  bool no_edges = false;
  gila_render_options render{};
  RenderJob() { gila_render_options_default(&render); }
};

int run_render(RenderJob job) {
  gila_graph* g = nullptr;
  check(gila_graph_load(job.input.c_str(), &g), "stage input");
  GraphPtr graph(g);
  gila_layout* l = nullptr;
  check(gila_layout_load(job.coords.c_str(), &l), "stage coords", kMetricMismatch);
  LayoutPtr layout(l);
  ClustersPtr clusters;
  if (job.cluster) {
    gila_clusters* c = nullptr;
    check(gila_cluster_select(graph.get(), l, job.seed, &c), "stage clustering");
    clusters.reset(c);
  }
  job.render.draw_edges = job.no_edges ? 0 : 1;
  CString text;
  check(gila_render_svg(graph.get(), l, clusters.get(), &job.render, &text.p), "stage render");
  write_text(job.svg, text.str());
  return kOk;
}

struct PartitionJob {
  std::string input;
  std::string output;
  std::uint32_t partitions = 2;
  double capacity_factor = 1.05;
  std::uint32_t iterations = 30;
  std::uint64_t seed = 1;
  std::uint32_t workers = 1;
};

int run_partition(const PartitionJob& job) {
  gila_graph* g = nullptr;
  check(gila_graph_load(job.input.c_str(), &g), "stage input");
  GraphPtr graph(g);
  gila_partition* p = nullptr;
  const gila_status st = gila_partition_run(graph.get(), job.partitions, job.capacity_factor, job.iterations,
                                            job.seed, job.workers, &p);
  if (st == GILA_ERR_CONFIG) fail_with(kUsage, gila_last_error());
  check(st, "stage partitioning");
  PartitionPtr part(p);
  if (!job.output.empty()) check(gila_partition_save(p, graph.get(), job.output.c_str()), "stage output");
  std::cout << "edge_cut=" << gila_partition_edge_cut(p) << '\n'
            << "iterations=" << gila_partition_iterations(p) << '\n'
            << "converged=" << gila_partition_converged(p) << '\n';
  return kOk;
}

struct GenerateJob {
  GraphSource source;
  std::string output;
};

int run_generate(const GenerateJob& job) {
  const auto opts = job.source.generator();
  gila_graph* g = nullptr;
  check(gila_graph_generate(&opts, &g), "stage generate");
  GraphPtr graph(g);
  CString desc;
  check(gila_generator_describe(&opts, &desc.p), "stage generate");
  check(gila_graph_save(g, job.output.c_str(), desc.p), "stage output");
  info("generated n=" + std::to_string(gila_graph_vertex_count(g)) + " m=" + std::to_string(gila_graph_edge_count(g)) +
       " -> " + job.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed-style force-directed graph layout on a vertex-centric BSP engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gila_version()));

  GenerateJob gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic edge list");
  gen.source.add_options(generate, false);
  generate->add_option("-o,--output", gen.output, "edge-list path")->required();

  LayoutJob lay;
  auto* layout = app.add_subcommand("layout", "run the full layout pipeline");
  lay.source.add_options(layout, false);
  lay.flags.add_options(layout);
  add_render_options(layout, lay.render);
  layout->add_option("-o,--output", lay.output, "coordinate file (default: <input>.coords)");
  layout->add_option("--svg", lay.svg, "also render an SVG drawing");
  layout->add_flag("--cluster", lay.cluster, "cluster vertex positions with k-means after the layout");
  layout->add_option("--clusters-out", lay.clusters_out, "cluster file (default: <output>.clusters)");
  layout->add_option("--cluster-seed", lay.cluster_seed, "k-means seed");
  layout->add_option("--manifest", lay.manifest, "manifest path (default: <output>.manifest.json)");
  layout->add_option("--timeout", lay.timeout, "seconds before the run is abandoned (0: none)")
      ->check(CLI::NonNegativeNumber);

  std::string manifest_path;
  std::string replay_output;
  auto* replay = app.add_subcommand("replay", "rerun a layout from its manifest");
  replay->add_option("manifest", manifest_path, "manifest written by layout")->required();
  replay->add_option("-o,--output", replay_output, "coordinate file (default: as recorded)");

  MetricsJob met;
  auto* metrics = app.add_subcommand("metrics", "drawing quality of a coordinate file");
  metrics->add_option("-i,--input", met.input, "edge-list file")->required();
  metrics->add_option("-c,--coords", met.coords, "coordinate file")->required();
  metrics->add_option("--csv", met.csv, "append a CSV row");

  ClusterJob clu;
  auto* cluster = app.add_subcommand("cluster", "k-means over vertex positions");
  cluster->add_option("-i,--input", clu.input, "edge-list file")->required();
  cluster->add_option("-c,--coords", clu.coords, "coordinate file")->required();
  cluster->add_option("-o,--output", clu.output, "cluster file (default: <coords>.clusters)");
  cluster->add_option("--clusters", clu.k, "fixed number of clusters (default: Calinski-Harabasz search)");
  cluster->add_option("--seed", clu.seed, "k-means seed");
  cluster->add_option("--svg", clu.svg, "render the clustered drawing");
  add_render_options(cluster, clu.render);

  RenderJob ren;
  auto* render = app.add_subcommand("render", "SVG drawing of a coordinate file");
  render->add_option("-i,--input", ren.input, "edge-list file")->required();
  render->add_option("-c,--coords", ren.coords, "coordinate file")->required();
  render->add_option("--svg", ren.svg, "output SVG")->required();
  render->add_flag("--cluster", ren.cluster, "colour vertices by k-means cluster");
  render->add_option("--seed", ren.seed, "k-means seed");
  render->add_flag("--no-edges", ren.no_edges, "draw vertices only");
  add_render_options(render, ren.render);

  PartitionJob par;
  auto* partition = app.add_subcommand("partition", "Spinner label-propagation partitioning");
  partition->add_option("-i,--input", par.input, "edge-list file")->required();
  partition->add_option("-o,--output", par.output, "labelling file");
  partition->add_option("--partitions", par.partitions, "number of partitions")->check(CLI::Range(1u, 1u << 20));
  partition->add_option("--capacity-factor", par.capacity_factor, "capacity factor")->check(CLI::Range(1.0, 100.0));
  partition->add_option("--max-iterations", par.iterations, "iteration limit")->check(CLI::Range(1u, 100000u));
  partition->add_option("--seed", par.seed, "seed");
  partition->add_option("--workers", par.workers, "engine worker threads")->check(CLI::Range(1u, 1024u));

  BenchJob ben;
  auto* bench = app.add_subcommand("bench", "run a benchmark grid and write CSV");
  bench->add_option("spec", ben.spec, "JSON spec: graphs, k, workers, seeds")->required();
  bench->add_option("--csv", ben.csv, "output CSV")->required();
  bench->add_option("--timeout", ben.timeout, "seconds per cell")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*layout) {
      lay.flags.finalize();
      return run_layout_job(lay, "layout");
    }
    if (*replay) {
      LayoutJob job = job_from_manifest(manifest_path);
      if (!replay_output.empty()) {
        job.output = replay_output;
        job.manifest.clear();
        job.svg.clear();
        job.clusters_out.clear();
      } else {
        job.manifest = manifest_path + ".replay.json";
      }
      if (gila_layout_options_validate(&job.flags.opts) != GILA_OK) fail_with(kUsage, gila_last_error());
      return run_layout_job(job, "replay");
    }
    if (*metrics) return run_metrics(met);
    if (*cluster) return run_cluster(clu);
    if (*render) return run_render(ren);
    if (*partition) return run_partition(par);
    if (*bench) return run_bench(ben);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

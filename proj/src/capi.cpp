#include "gila/gila.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "gila/clustering.hpp"
#include "gila/errors.hpp"
#include "gila/graph.hpp"
#include "gila/layout.hpp"
#include "gila/metrics.hpp"
#include "gila/partition.hpp"
#include "gila/render.hpp"

struct gila_graph {
  gila::Graph graph;
};

struct gila_layout {
  gila::Layout layout;
  std::vector<gila::StageTiming> timings;
  std::uint32_t partition_iterations = 0;
  std::uint64_t partition_edge_cut = 0;
};

struct gila_clusters {
  gila::ClusterAssignment assignment;
};

struct gila_partition {
  gila::PartitionLabeling labeling;
  std::uint64_t edge_cut = 0;
};

namespace {

thread_local std::string last_error;

gila_status status_of(gila::ErrorKind kind) {
  using K = gila::ErrorKind;
  switch (kind) {
    case K::InvalidArgument: return GILA_ERR_INVALID_ARGUMENT;
    case K::Parse: return GILA_ERR_PARSE;
    case K::Io: return GILA_ERR_IO;
    case K::EmptyGraph: return GILA_ERR_EMPTY_GRAPH;
    case K::Config: return GILA_ERR_CONFIG;
    case K::Infeasible: return GILA_ERR_INFEASIBLE;
    case K::Lookup: return GILA_ERR_LOOKUP;
    case K::ContractViolation: return GILA_ERR_CONTRACT;
    case K::Resource: return GILA_ERR_RESOURCE;
    case K::Numerical: return GILA_ERR_NUMERICAL;
    case K::Timeout: return GILA_ERR_TIMEOUT;
    case K::Mismatch: return GILA_ERR_MISMATCH;
  }
  return GILA_ERR_INTERNAL;
}

template <class F>
gila_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return GILA_OK;
  } catch (const gila::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GILA_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GILA_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return GILA_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) gila::fail(gila::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

gila::GeneratorSpec to_spec(const gila_generator_options& o) {
  gila::GeneratorSpec s;
  s.model = o.model == GILA_MODEL_BARABASI_ALBERT ? gila::GeneratorModel::BarabasiAlbert
                                                  : gila::GeneratorModel::ErdosRenyi;
  s.target_edges = o.target_edges;
  s.density = o.density;
  s.seed = o.seed;
  return s;
}

struct Configs {
  gila::ForceConfig force;
  gila::SpinnerConfig spinner;
  gila::bsp::RunConfig run;
};

Configs to_configs(const gila_layout_options& o) {
  Configs c;
  if (o.mode != GILA_MODE_FR && o.mode != GILA_MODE_LINLOG) gila::fail(gila::ErrorKind::Config, "unknown force mode");
  c.force.set_mode(o.mode == GILA_MODE_LINLOG ? gila::ForceMode::LinLog : gila::ForceMode::FR);
  c.force.k = o.k;
  c.force.ns = o.ns;
  c.force.nh = o.nh;
  c.force.nw = o.nw;
  c.force.frame_width = o.frame_width;
  c.force.frame_height = o.frame_height;
  c.force.cool_base = o.cool_base;
  c.force.conv_threshold = o.conv_threshold;
  c.force.conv_fraction = o.conv_fraction;
  c.force.max_iterations = o.max_iterations;
  c.force.seed = o.seed;
  c.force.rho = o.rho;
  c.force.validate();

  if (o.workers == 0) gila::fail(gila::ErrorKind::Config, "workers must be at least 1");
  if (o.workers > 1024) gila::fail(gila::ErrorKind::Config, "workers must be at most 1024");
  c.run.workers = o.workers;
  c.run.seed = o.seed;
  c.run.message_cap = o.message_cap;
  c.run.verbose = o.verbose != 0;
  c.run.log = &std::cerr;
  if (o.timeout_seconds > 0)
    c.run.deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(o.timeout_seconds));

  c.spinner.num_partitions = o.partitions == 0 ? o.workers : o.partitions;
  c.spinner.capacity_factor = o.capacity_factor;
  c.spinner.max_iterations = o.partition_max_iterations;
  c.spinner.seed = o.partition_seed;
  if (!(o.capacity_factor >= 1.0)) gila::fail(gila::ErrorKind::Config, "capacity factor must be at least 1");
  if (o.partition_max_iterations == 0) gila::fail(gila::ErrorKind::Config, "partition iterations must be positive");
  return c;
}

void from_meta(const gila::LayoutMeta& m, gila_layout_options* o) {
  gila_layout_options_default(o);
  o->mode = m.force.mode == gila::ForceMode::LinLog ? GILA_MODE_LINLOG : GILA_MODE_FR;
  o->k = m.force.k;
  o->ns = m.force.ns;
  o->nh = m.force.nh;
  o->nw = m.force.nw;
  o->frame_width = m.force.frame_width;
  o->frame_height = m.force.frame_height;
  o->cool_base = m.force.cool_base;
  o->conv_threshold = m.force.conv_threshold;
  o->conv_fraction = m.force.conv_fraction;
  o->max_iterations = m.force.max_iterations;
  o->seed = m.force.seed;
  o->rho = m.force.rho;
  o->partitions = m.spinner.num_partitions;
  o->capacity_factor = m.spinner.capacity_factor;
  o->partition_max_iterations = m.spinner.max_iterations;
  o->partition_seed = m.spinner.seed;
  o->workers = m.workers;
}

std::vector<gila::Vec2> positions(const gila_graph* g, const gila_layout* l) {
  need(g, "graph");
  need(l, "layout");
  return gila::coords_for(g->graph, l->layout);
}

}  // namespace

extern "C" {

const char* gila_version(void) { return "0.1.0"; }

const char* gila_last_error(void) { return last_error.c_str(); }

const char* gila_status_name(gila_status status) {
  switch (status) {
    case GILA_OK: return "ok";
    case GILA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GILA_ERR_PARSE: return "parse error";
    case GILA_ERR_IO: return "i/o error";
    case GILA_ERR_EMPTY_GRAPH: return "empty graph";
    case GILA_ERR_CONFIG: return "configuration error";
    case GILA_ERR_INFEASIBLE: return "infeasible";
    case GILA_ERR_LOOKUP: return "lookup error";
    case GILA_ERR_CONTRACT: return "contract violation";
    case GILA_ERR_RESOURCE: return "resource limit";
    case GILA_ERR_NUMERICAL: return "numerical error";
    case GILA_ERR_TIMEOUT: return "timeout";
    case GILA_ERR_MISMATCH: return "mismatch";
    case GILA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gila_string_free(char* s) { std::free(s); }

void gila_generator_options_default(gila_generator_options* opts) {
  if (!opts) return;
  const gila::GeneratorSpec s;
  opts->model = GILA_MODEL_ERDOS_RENYI;
  opts->target_edges = s.target_edges;
  opts->density = s.density;
  opts->seed = s.seed;
}

gila_status gila_generator_describe(const gila_generator_options* opts, char** out) {
  return guarded([&] {
    need(opts, "options");
    need(out, "out");
    *out = dup_string(gila::describe(to_spec(*opts)));
  });
}

gila_status gila_graph_generate(const gila_generator_options* opts, gila_graph** out) {
  return guarded([&] {
    need(opts, "options");
    need(out, "out");
    *out = new gila_graph{gila::generate(to_spec(*opts))};
  });
}

gila_status gila_graph_load(const char* path, gila_graph** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gila_graph{gila::load_edge_list(path)};
  });
}

gila_status gila_graph_save(const gila_graph* g, const char* path, const char* comment) {
  return guarded([&] {
    need(g, "graph");
    need(path, "path");
    std::vector<std::string> comments;
    if (comment) comments.emplace_back(comment);
    gila::write_edge_list(g->graph, path, comments);
  });
}

void gila_graph_free(gila_graph* g) { delete g; }
size_t gila_graph_vertex_count(const gila_graph* g) { return g ? g->graph.vertex_count() : 0; }
size_t gila_graph_edge_count(const gila_graph* g) { return g ? g->graph.edge_count() : 0; }

void gila_layout_options_default(gila_layout_options* o) {
  if (!o) return;
  const gila::ForceConfig f;
  const gila::SpinnerConfig s;
  o->mode = GILA_MODE_FR;
  o->k = f.k;
  o->ns = f.ns;
  o->nh = f.nh;
  o->nw = f.nw;
  o->frame_width = f.frame_width;
  o->frame_height = f.frame_height;
  o->cool_base = f.cool_base;
  o->conv_threshold = f.conv_threshold;
  o->conv_fraction = f.conv_fraction;
  o->max_iterations = f.max_iterations;
  o->seed = f.seed;
  o->rho = f.rho;
  o->partitions = 0;
  o->capacity_factor = s.capacity_factor;
  o->partition_max_iterations = s.max_iterations;
  o->partition_seed = s.seed;
  o->workers = 1;
  o->message_cap = 0;
  o->timeout_seconds = 0;
  o->verbose = 0;
}

gila_status gila_layout_options_validate(const gila_layout_options* opts) {
  return guarded([&] {
    need(opts, "options");
    (void)to_configs(*opts);
  });
}

gila_status gila_layout_run(const gila_graph* g, const gila_layout_options* opts, gila_layout** out) {
  return guarded([&] {
    need(g, "graph");
    need(opts, "options");
    need(out, "out");
    const Configs c = to_configs(*opts);
    auto result = gila::run_pipeline(g->graph, c.force, c.run, c.spinner);
    *out = new gila_layout{std::move(result.layout), std::move(result.timings), result.partition_iterations,
                           result.partition_edge_cut};
  });
}

gila_status gila_layout_load(const char* path, gila_layout** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gila_layout{gila::read_coords(path), {}, 0, 0};
  });
}

gila_status gila_layout_save(const gila_layout* layout, const char* path) {
  return guarded([&] {
    need(layout, "layout");
    need(path, "path");
    gila::write_coords(layout->layout, path);
  });
}

void gila_layout_free(gila_layout* layout) { delete layout; }
size_t gila_layout_vertex_count(const gila_layout* layout) { return layout ? layout->layout.size() : 0; }

gila_status gila_layout_get(const gila_layout* layout, size_t index, int64_t* id, double* x, double* y) {
  return guarded([&] {
    need(layout, "layout");
    if (index >= layout->layout.size()) gila::fail(gila::ErrorKind::Lookup, "layout index out of range");
    if (id) *id = layout->layout.ids[index];
    if (x) *x = layout->layout.coords[index].x;
    if (y) *y = layout->layout.coords[index].y;
  });
}

gila_status gila_layout_get_info(const gila_layout* layout, gila_layout_info* out) {
  return guarded([&] {
    need(layout, "layout");
    need(out, "out");
    const auto& m = layout->layout.meta;
    out->iterations = m.iterations;
    out->supersteps = m.supersteps;
    out->total_messages = m.total_messages;
    out->peak_messages = m.peak_messages;
    out->message_cap = m.message_cap;
    out->converged = m.converged ? 1 : 0;
    out->partition_iterations = layout->partition_iterations;
    out->partition_edge_cut = layout->partition_edge_cut;
  });
}

gila_status gila_layout_get_options(const gila_layout* layout, gila_layout_options* out) {
  return guarded([&] {
    need(layout, "layout");
    need(out, "out");
    from_meta(layout->layout.meta, out);
  });
}

size_t gila_layout_stage_count(const gila_layout* layout) { return layout ? layout->timings.size() : 0; }

gila_status gila_layout_stage(const gila_layout* layout, size_t index, const char** name, double* seconds) {
  return guarded([&] {
    need(layout, "layout");
    if (index >= layout->timings.size()) gila::fail(gila::ErrorKind::Lookup, "stage index out of range");
    if (name) *name = layout->timings[index].stage.c_str();
    if (seconds) *seconds = layout->timings[index].seconds;
  });
}

gila_status gila_quality(const gila_graph* g, const gila_layout* layout, gila_quality_report* out) {
  return guarded([&] {
    need(out, "out");
    const auto pos = positions(g, layout);
    const auto r = gila::measure_quality(g->graph, pos);
    *out = {r.cre, r.eld, r.sim_raw, r.crossings};
  });
}

gila_status gila_cluster_select(const gila_graph* g, const gila_layout* layout, uint64_t seed, gila_clusters** out) {
  return guarded([&] {
    need(out, "out");
    const auto pos = positions(g, layout);
    *out = new gila_clusters{gila::select_k(pos, seed)};
  });
}

gila_status gila_cluster_kmeans(const gila_graph* g, const gila_layout* layout, uint32_t k, uint64_t seed,
                                gila_clusters** out) {
  return guarded([&] {
    need(out, "out");
    const auto pos = positions(g, layout);
    *out = new gila_clusters{gila::kmeans(pos, k, seed)};
  });
}

void gila_clusters_free(gila_clusters* c) { delete c; }
uint32_t gila_clusters_k(const gila_clusters* c) { return c ? c->assignment.k : 0; }

gila_status gila_clusters_get(const gila_clusters* c, size_t vertex, uint32_t* cluster) {
  return guarded([&] {
    need(c, "clusters");
    need(cluster, "cluster");
    if (vertex >= c->assignment.cluster.size()) gila::fail(gila::ErrorKind::Lookup, "vertex index out of range");
    *cluster = c->assignment.cluster[vertex];
  });
}

gila_status gila_clusters_save(const gila_clusters* c, const gila_graph* g, const char* path) {
  return guarded([&] {
    need(c, "clusters");
    need(g, "graph");
    need(path, "path");
    gila::write_clusters(g->graph, c->assignment, path);
  });
}

gila_status gila_clusters_quality(const gila_clusters* c, const gila_graph* g, gila_cluster_quality* out) {
  return guarded([&] {
    need(c, "clusters");
    need(g, "graph");
    need(out, "out");
    const auto q = gila::clustering_quality(g->graph, c->assignment.cluster);
    *out = {q.performance, q.coverage, q.conductance, q.modularity, q.modularity_raw};
  });
}

void gila_render_options_default(gila_render_options* opts) {
  if (!opts) return;
  const gila::RenderOptions r;
  opts->vertex_radius = r.vertex_radius;
  opts->edge_width = r.edge_width;
  opts->width = r.width;
  opts->height = r.height;
  opts->draw_edges = r.draw_edges ? 1 : 0;
}

gila_status gila_render_svg(const gila_graph* g, const gila_layout* layout, const gila_clusters* clusters,
                            const gila_render_options* opts, char** out) {
  return guarded([&] {
    need(g, "graph");
    need(layout, "layout");
    need(out, "out");
    gila::RenderOptions r;
    if (opts) {
      r.vertex_radius = opts->vertex_radius;
      r.edge_width = opts->edge_width;
      r.width = opts->width;
      r.height = opts->height;
      r.draw_edges = opts->draw_edges != 0;
    }
    *out = dup_string(gila::to_svg(layout->layout, g->graph, clusters ? &clusters->assignment : nullptr, r));
  });
}

gila_status gila_partition_run(const gila_graph* g, uint32_t partitions, double capacity_factor,
                               uint32_t max_iterations, uint64_t seed, uint32_t workers, gila_partition** out) {
  return guarded([&] {
    need(g, "graph");
    need(out, "out");
    if (workers == 0) gila::fail(gila::ErrorKind::Config, "workers must be at least 1");
    gila::SpinnerConfig cfg{partitions, capacity_factor, max_iterations, seed};
    gila::bsp::RunConfig run;
    run.workers = workers;
    run.seed = seed;
    auto labeling = gila::spinner_partition(g->graph, cfg, run);
    const auto cut = gila::edge_cut(g->graph, labeling.label);
    *out = new gila_partition{std::move(labeling), cut};
  });
}

void gila_partition_free(gila_partition* p) { delete p; }
uint64_t gila_partition_edge_cut(const gila_partition* p) { return p ? p->edge_cut : 0; }
uint32_t gila_partition_iterations(const gila_partition* p) { return p ? p->labeling.iterations : 0; }
int gila_partition_converged(const gila_partition* p) { return p && p->labeling.converged ? 1 : 0; }

gila_status gila_partition_save(const gila_partition* p, const gila_graph* g, const char* path) {
  return guarded([&] {
    need(p, "partition");
    need(g, "graph");
    need(path, "path");
    gila::write_labeling(g->graph, p->labeling.label, path);
  });
}

}  // extern "C"

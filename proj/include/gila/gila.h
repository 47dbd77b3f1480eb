/* C interface to the gila layout library.
 *
 * All objects are opaque handles released with their *_free function.
 * Functions return a gila_status; on failure gila_last_error() describes the
 * problem (per thread, valid until the next call on that thread). Strings
 * returned through char** must be released with gila_string_free. */
#ifndef GILA_GILA_H
#define GILA_GILA_H

#include <stddef.h>
#include <stdint.h>

#if defined(GILA_BUILDING_LIBRARY)
#define GILA_API __attribute__((visibility("default")))
#else
#define GILA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gila_status {
  GILA_OK = 0,
  GILA_ERR_INVALID_ARGUMENT = 1,
  GILA_ERR_PARSE = 2,
  GILA_ERR_IO = 3,
  GILA_ERR_EMPTY_GRAPH = 4,
  GILA_ERR_CONFIG = 5,
  GILA_ERR_INFEASIBLE = 6,
  GILA_ERR_LOOKUP = 7,
  GILA_ERR_CONTRACT = 8,
  GILA_ERR_RESOURCE = 9,
  GILA_ERR_NUMERICAL = 10,
  GILA_ERR_TIMEOUT = 11,
  GILA_ERR_MISMATCH = 12,
  GILA_ERR_INTERNAL = 99
} gila_status;

typedef struct gila_graph gila_graph;
typedef struct gila_layout gila_layout;
typedef struct gila_clusters gila_clusters;
typedef struct gila_partition gila_partition;

GILA_API const char* gila_version(void);
GILA_API const char* gila_last_error(void);
GILA_API const char* gila_status_name(gila_status status);
GILA_API void gila_string_free(char* s);

/* Graphs */

typedef enum gila_model { GILA_MODEL_ERDOS_RENYI = 0, GILA_MODEL_BARABASI_ALBERT = 1 } gila_model;

typedef struct gila_generator_options {
  gila_model model;
  uint64_t target_edges;
  double density; /* m / n, in [2, 3] */
  uint64_t seed;
} gila_generator_options;

GILA_API void gila_generator_options_default(gila_generator_options* opts);
GILA_API gila_status gila_generator_describe(const gila_generator_options* opts, char** out);
GILA_API gila_status gila_graph_generate(const gila_generator_options* opts, gila_graph** out);
GILA_API gila_status gila_graph_load(const char* path, gila_graph** out);
/* `comment` may be NULL; otherwise it is written as a leading `#` line. */
GILA_API gila_status gila_graph_save(const gila_graph* g, const char* path, const char* comment);
GILA_API void gila_graph_free(gila_graph* g);
GILA_API size_t gila_graph_vertex_count(const gila_graph* g);
GILA_API size_t gila_graph_edge_count(const gila_graph* g);

/* Layout pipeline */

typedef enum gila_mode { GILA_MODE_FR = 0, GILA_MODE_LINLOG = 1 } gila_mode;

typedef struct gila_layout_options {
  /* force model */
  gila_mode mode;
  uint32_t k;
  double ns, nh, nw;
  double frame_width, frame_height;
  double cool_base;
  double conv_threshold;
  double conv_fraction;
  uint32_t max_iterations;
  uint64_t seed;
  double rho;
  /* partitioning */
  uint32_t partitions; /* 0: one per worker */
  double capacity_factor;
  uint32_t partition_max_iterations;
  uint64_t partition_seed;
  /* engine */
  uint32_t workers;
  uint64_t message_cap; /* 0: default */
  double timeout_seconds; /* <= 0: none */
  int verbose;            /* superstep statistics on stderr */
} gila_layout_options;

typedef struct gila_layout_info {
  uint64_t iterations;
  uint64_t supersteps;
  uint64_t total_messages;
  uint64_t peak_messages;
  uint64_t message_cap;
  int converged;
  uint32_t partition_iterations;
  uint64_t partition_edge_cut;
} gila_layout_info;

GILA_API void gila_layout_options_default(gila_layout_options* opts);
GILA_API gila_status gila_layout_options_validate(const gila_layout_options* opts);
GILA_API gila_status gila_layout_run(const gila_graph* g, const gila_layout_options* opts, gila_layout** out);
GILA_API gila_status gila_layout_load(const char* path, gila_layout** out);
GILA_API gila_status gila_layout_save(const gila_layout* layout, const char* path);
GILA_API void gila_layout_free(gila_layout* layout);
GILA_API size_t gila_layout_vertex_count(const gila_layout* layout);
GILA_API gila_status gila_layout_get(const gila_layout* layout, size_t index, int64_t* id, double* x, double* y);
GILA_API gila_status gila_layout_get_info(const gila_layout* layout, gila_layout_info* out);
/* Settings the layout was produced with (as recorded in its header). */
GILA_API gila_status gila_layout_get_options(const gila_layout* layout, gila_layout_options* out);
GILA_API size_t gila_layout_stage_count(const gila_layout* layout);
GILA_API gila_status gila_layout_stage(const gila_layout* layout, size_t index, const char** name, double* seconds);

/* Metrics */

typedef struct gila_quality_report {
  double cre;
  double eld;
  double sim_raw;
  uint64_t crossings;
} gila_quality_report;

typedef struct gila_cluster_quality {
  double performance;
  double coverage;
  double conductance;
  double modularity;
  double modularity_raw;
} gila_cluster_quality;

GILA_API gila_status gila_quality(const gila_graph* g, const gila_layout* layout, gila_quality_report* out);

/* Clustering of vertex positions */

GILA_API gila_status gila_cluster_select(const gila_graph* g, const gila_layout* layout, uint64_t seed,
                                         gila_clusters** out);
GILA_API gila_status gila_cluster_kmeans(const gila_graph* g, const gila_layout* layout, uint32_t k,
                                         uint64_t seed, gila_clusters** out);
GILA_API void gila_clusters_free(gila_clusters* c);
GILA_API uint32_t gila_clusters_k(const gila_clusters* c);
GILA_API gila_status gila_clusters_get(const gila_clusters* c, size_t vertex, uint32_t* cluster);
GILA_API gila_status gila_clusters_save(const gila_clusters* c, const gila_graph* g, const char* path);
GILA_API gila_status gila_clusters_quality(const gila_clusters* c, const gila_graph* g, gila_cluster_quality* out);

/* Rendering */

typedef struct gila_render_options {
  double vertex_radius;
  double edge_width;
  double width;
  double height;
  int draw_edges;
} gila_render_options;

GILA_API void gila_render_options_default(gila_render_options* opts);
/* `clusters` may be NULL. */
GILA_API gila_status gila_render_svg(const gila_graph* g, const gila_layout* layout, const gila_clusters* clusters,
                                     const gila_render_options* opts, char** out);

/* Partitioning on its own */

GILA_API gila_status gila_partition_run(const gila_graph* g, uint32_t partitions, double capacity_factor,
                                        uint32_t max_iterations, uint64_t seed, uint32_t workers,
                                        gila_partition** out);
GILA_API void gila_partition_free(gila_partition* p);
GILA_API uint64_t gila_partition_edge_cut(const gila_partition* p);
GILA_API uint32_t gila_partition_iterations(const gila_partition* p);
GILA_API int gila_partition_converged(const gila_partition* p);
GILA_API gila_status gila_partition_save(const gila_partition* p, const gila_graph* g, const char* path);

#ifdef __cplusplus
}
#endif

#endif

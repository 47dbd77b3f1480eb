/* Exercises the shared library through gila.h only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "gila/gila.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void write_file(const char* path, const char* text) {
  FILE* f = fopen(path, "w");
  if (!f) {
    perror(path);
    exit(1);
  }
  fputs(text, f);
  fclose(f);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  char graph_path[512], coords_path[512], k4_coords[512], clusters_path[512], labels_path[512];
  snprintf(graph_path, sizeof graph_path, "%s/capi_k4.txt", dir);
  snprintf(coords_path, sizeof coords_path, "%s/capi_layout.coords", dir);
  snprintf(k4_coords, sizeof k4_coords, "%s/capi_k4.coords", dir);
  snprintf(clusters_path, sizeof clusters_path, "%s/capi.clusters", dir);
  snprintf(labels_path, sizeof labels_path, "%s/capi.labels", dir);

  EXPECT(strlen(gila_version()) > 0);
  EXPECT(strcmp(gila_status_name(GILA_OK), "ok") == 0);

  /* Errors surface as status codes plus a message. */
  gila_graph* g = NULL;
  EXPECT(gila_graph_load("/nonexistent/graph.txt", &g) == GILA_ERR_IO);
  EXPECT(g == NULL);
  EXPECT(strstr(gila_last_error(), "nonexistent") != NULL);
  EXPECT(gila_graph_load(NULL, &g) != GILA_OK);

  write_file(graph_path, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  EXPECT(gila_graph_load(graph_path, &g) == GILA_OK);
  EXPECT(gila_graph_vertex_count(g) == 4);
  EXPECT(gila_graph_edge_count(g) == 6);

  /* Metrics on the unit-square drawing of K4. */
  write_file(k4_coords, "0 0 0\n1 1 0\n2 1 1\n3 0 1\n");
  gila_layout* square = NULL;
  EXPECT(gila_layout_load(k4_coords, &square) == GILA_OK);
  gila_quality_report q;
  EXPECT(gila_quality(g, square, &q) == GILA_OK);
  EXPECT(q.crossings == 1);
  EXPECT(fabs(q.cre - 1.0 / 6.0) < 1e-12);

  /* Options validation. */
  gila_layout_options o;
  gila_layout_options_default(&o);
  EXPECT(o.k == 2 && o.workers == 1 && o.frame_width == 1200.0);
  EXPECT(gila_layout_options_validate(&o) == GILA_OK);
  o.k = 0;
  EXPECT(gila_layout_options_validate(&o) == GILA_ERR_CONFIG);
  o.k = 2;
  o.workers = 0;
  EXPECT(gila_layout_options_validate(&o) == GILA_ERR_CONFIG);
  o.workers = 2;

  /* Generated graph, full layout, save and reload. */
  gila_generator_options gen;
  gila_generator_options_default(&gen);
  gen.target_edges = 600;
  gen.density = 2.5;
  gen.seed = 3;
  gila_graph* er = NULL;
  EXPECT(gila_graph_generate(&gen, &er) == GILA_OK);
  EXPECT(gila_graph_edge_count(er) == 600);
  gen.density = 5.0;
  gila_graph* bad = NULL;
  EXPECT(gila_graph_generate(&gen, &bad) == GILA_ERR_CONFIG);

  gila_layout* lay = NULL;
  EXPECT(gila_layout_run(er, &o, &lay) == GILA_OK);
  EXPECT(gila_layout_vertex_count(lay) == gila_graph_vertex_count(er));
  gila_layout_info info;
  EXPECT(gila_layout_get_info(lay, &info) == GILA_OK);
  EXPECT(info.iterations > 0 && info.supersteps > info.iterations);
  EXPECT(info.peak_messages <= info.message_cap);
  EXPECT(gila_layout_stage_count(lay) == 7);
  const char* stage = NULL;
  double seconds = -1;
  EXPECT(gila_layout_stage(lay, 0, &stage, &seconds) == GILA_OK);
  EXPECT(stage && strcmp(stage, "components") == 0 && seconds >= 0);
  EXPECT(gila_layout_stage(lay, 7, &stage, &seconds) != GILA_OK);

  int64_t id;
  double x, y;
  EXPECT(gila_layout_get(lay, 0, &id, &x, &y) == GILA_OK);
  EXPECT(isfinite(x) && isfinite(y));
  EXPECT(gila_layout_get(lay, 1u << 30, &id, &x, &y) == GILA_ERR_LOOKUP);

  EXPECT(gila_layout_save(lay, coords_path) == GILA_OK);
  gila_layout* back = NULL;
  EXPECT(gila_layout_load(coords_path, &back) == GILA_OK);
  gila_layout_options ro;
  EXPECT(gila_layout_get_options(back, &ro) == GILA_OK);
  EXPECT(ro.k == 2 && ro.workers == 2 && ro.seed == o.seed);

  /* Same run with one worker is bit-identical. */
  o.workers = 1;
  gila_layout* one = NULL;
  EXPECT(gila_layout_run(er, &o, &one) == GILA_OK);
  for (size_t i = 0; i < gila_layout_vertex_count(one); ++i) {
    int64_t ia, ib;
    double xa, ya, xb, yb;
    gila_layout_get(one, i, &ia, &xa, &ya);
    gila_layout_get(lay, i, &ib, &xb, &yb);
    if (ia != ib || xa != xb || ya != yb) {
      ++failures;
      fprintf(stderr, "worker count changed vertex %zu\n", i);
      break;
    }
  }

  /* Vertex set mismatch between a graph and a drawing. */
  EXPECT(gila_quality(er, square, &q) == GILA_ERR_MISMATCH || gila_quality(er, square, &q) == GILA_ERR_LOOKUP);

  /* Clustering and rendering. */
  gila_clusters* cl = NULL;
  EXPECT(gila_cluster_select(er, lay, 1, &cl) == GILA_OK);
  EXPECT(gila_clusters_k(cl) >= 2);
  uint32_t c0;
  EXPECT(gila_clusters_get(cl, 0, &c0) == GILA_OK && c0 < gila_clusters_k(cl));
  EXPECT(gila_clusters_save(cl, er, clusters_path) == GILA_OK);
  gila_cluster_quality cq;
  EXPECT(gila_clusters_quality(cl, er, &cq) == GILA_OK);
  EXPECT(cq.coverage >= 0 && cq.coverage <= 1);
  gila_clusters* k3 = NULL;
  EXPECT(gila_cluster_kmeans(er, lay, 3, 1, &k3) == GILA_OK);
  EXPECT(gila_clusters_k(k3) == 3);

  gila_render_options ropt;
  gila_render_options_default(&ropt);
  char* svg = NULL;
  EXPECT(gila_render_svg(er, lay, cl, &ropt, &svg) == GILA_OK);
  EXPECT(svg && strstr(svg, "<svg") && strstr(svg, "</svg>"));
  gila_string_free(svg);
  svg = NULL;
  EXPECT(gila_render_svg(er, lay, NULL, &ropt, &svg) == GILA_OK);
  gila_string_free(svg);
  ropt.width = -1;
  svg = NULL;
  EXPECT(gila_render_svg(er, lay, NULL, &ropt, &svg) != GILA_OK);
  EXPECT(svg == NULL);

  /* Partitioning. */
  gila_partition* part = NULL;
  EXPECT(gila_partition_run(er, 4, 1.05, 30, 1, 2, &part) == GILA_OK);
  EXPECT(gila_partition_edge_cut(part) <= gila_graph_edge_count(er));
  EXPECT(gila_partition_iterations(part) >= 1);
  EXPECT(gila_partition_save(part, er, labels_path) == GILA_OK);
  gila_partition* nope = NULL;
  EXPECT(gila_partition_run(er, 4, 0.5, 30, 1, 1, &nope) == GILA_ERR_CONFIG);

  /* Free functions accept NULL. */
  gila_graph_free(NULL);
  gila_layout_free(NULL);
  gila_clusters_free(NULL);
  gila_partition_free(NULL);
  gila_string_free(NULL);

  gila_partition_free(part);
  gila_clusters_free(k3);
  gila_clusters_free(cl);
  gila_layout_free(one);
  gila_layout_free(back);
  gila_layout_free(lay);
  gila_layout_free(square);
  gila_graph_free(er);
  gila_graph_free(g);

  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}

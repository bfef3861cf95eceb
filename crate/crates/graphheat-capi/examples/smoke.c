/* Minimal C consumer of the graphheat C ABI: parse a star graph,
 * evaluate the diagonal heat kernel at the center, and check the
 * small-time vertex factor 2/d. */

#include "graphheat.h"
#include <math.h>
#include <stdio.h>

static const char *STAR5 =
    "{\"vertices\": [\"c\", \"t0\", \"t1\", \"t2\", \"t3\", \"t4\"],"
    " \"edges\": ["
    "  {\"id\": \"e0\", \"from\": \"c\", \"to\": \"t0\", \"length\": 1.0},"
    "  {\"id\": \"e1\", \"from\": \"c\", \"to\": \"t1\", \"length\": 1.0},"
    "  {\"id\": \"e2\", \"from\": \"c\", \"to\": \"t2\", \"length\": 1.0},"
    "  {\"id\": \"e3\", \"from\": \"c\", \"to\": \"t3\", \"length\": 1.0},"
    "  {\"id\": \"e4\", \"from\": \"c\", \"to\": \"t4\", \"length\": 1.0}"
    " ]}";

int main(void) {
  GhGraph *graph = NULL;
  if (gh_graph_parse_json(STAR5, &graph) != GH_STATUS_OK) {
    fprintf(stderr, "parse failed: %s\n", gh_last_error_message());
    return 1;
  }
  double value = 0.0, bound = 0.0;
  double t = 0.005;
  if (gh_heat_diagonal(graph, t, "e0", 0.0, 1e-10, &value, &bound) !=
      GH_STATUS_OK) {
    fprintf(stderr, "heat failed: %s\n", gh_last_error_message());
    gh_graph_free(graph);
    return 1;
  }
  double factor = value * sqrt(4.0 * M_PI * t);
  if (fabs(factor - 0.4) > 1e-9 || bound > 1e-10) {
    fprintf(stderr, "unexpected value %.17g (bound %.3g)\n", factor, bound);
    gh_graph_free(graph);
    return 1;
  }
  gh_graph_free(graph);
  printf("ok: center factor %.12f\n", factor);
  return 0;
}

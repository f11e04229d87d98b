#include <stdio.h>
#include <string.h>

#include "absgrid.h"

#define CHECK(call)                                                            \
  do {                                                                         \
    AbsgridStatus s_ = (call);                                                 \
    if (s_ != ABSGRID_STATUS_OK) {                                             \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, absgrid_last_error()); \
      return 1;                                                                \
    }                                                                          \
  } while (0)

int main(void) {
  AbsgridInstance *inst = NULL;
  AbsgridOutcome *out = NULL;
  AbsgridMapping *m = NULL;
  AbsgridRunStatus status;
  size_t steps = 0;
  double cost = 0.0;
  char *json = NULL;

  CHECK(absgrid_instance_generate("reachability", 8, 0, true, &inst));
  CHECK(absgrid_refine(inst, "grid-inc", 0, &out));
  CHECK(absgrid_outcome_status(out, &status));
  CHECK(absgrid_outcome_steps(out, &steps));
  CHECK(absgrid_outcome_cost(out, &cost));
  CHECK(absgrid_outcome_report_json(out, &json));
  if (status != ABSGRID_RUN_STATUS_ABSTRACT_UNSAT || steps == 0 || !(cost > 0.0) ||
      strstr(json, "\"abstract_unsat\"") == NULL) {
    fprintf(stderr, "unexpected outcome\n");
    return 1;
  }
  absgrid_string_free(json);

  if (absgrid_mapping_parse("n=8 b=2; x=1..3 y=1..4", &m) != ABSGRID_STATUS_GRID ||
      absgrid_last_error() == NULL) {
    fprintf(stderr, "bad mapping accepted\n");
    return 1;
  }
  CHECK(absgrid_outcome_final_mapping(out, &m));
  absgrid_mapping_free(m);
  absgrid_outcome_free(out);
  absgrid_instance_free(inst);
  printf("steps=%zu cost=%.4f\n", steps, cost);
  return 0;
}

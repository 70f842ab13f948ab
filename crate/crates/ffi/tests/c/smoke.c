#include <math.h>
#include <stdio.h>
#include <string.h>

#include "sedlab.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,     \
              sed_last_error_message());                         \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  SedSedenion *v = NULL;
  CHECK(sed_sedenion_parse("e1+e10", &v) == SED_STATUS_OK);
  bool zd = false;
  CHECK(sed_is_zero_divisor(v, &zd) == SED_STATUS_OK && zd);

  double w[16], residual = 1.0;
  CHECK(sed_find_annihilator(v, w, &residual) == SED_STATUS_OK);
  CHECK(residual <= 1e-10);

  SedInvariants inv;
  CHECK(sed_invariants(v, &inv) == SED_STATUS_OK);
  CHECK(inv.d1 == 2.0 && inv.d2 == 0.0 && inv.delta == 0.0);
  sed_sedenion_free(v);

  SedSedenion *bad = NULL;
  CHECK(sed_sedenion_parse("1,2,3", &bad) != SED_STATUS_OK && bad == NULL);
  CHECK(strlen(sed_last_error_message()) > 0);

  SedTrace *tr = NULL;
  CHECK(sed_holonomy_run(400, 42, &tr) == SED_STATUS_OK);
  CHECK(sed_trace_len(tr) == 401);
  SedLineFit fit;
  CHECK(sed_trace_fit(tr, &fit) == SED_STATUS_OK);
  CHECK(fabs(fit.slope - 1.0) <= 1e-3);
  sed_trace_free(tr);

  printf("sedlab %s ok\n", sed_version());
  return 0;
}
